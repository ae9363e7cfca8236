"""
Configuration Loader
Loads runner properties and the built-in scenario registry

© 2025-2030 All rights reserved Ashutosh Sinha
email: ajsinha@gmail.com
"""

import copy
import json
import logging
import os
from typing import Any, Dict, List, Optional

from .properties_configurator import PropertiesConfigurator

DEFAULT_OUTPUT_ROOT = './crflow_out'

DEFAULT_PROPERTIES = {
    'crflow.default.n_nodes': '256',
    'crflow.default.dt_safety': '0.2',
    'crflow.default.t_end': '0.1',
    'crflow.sweep.max_workers': '4',
    'CRFLOW_LOG_LEVEL': 'INFO',
}


def default_config_dir() -> str:
    return os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'flowconfig')


class ConfigLoader:
    """
    Reads flowconfig/application.properties and flowconfig/scenarios.json.

    A missing file logs a warning and the loader falls back to built-in
    defaults (and an empty scenario registry).
    """

    def __init__(self, config_dir: Optional[str] = None):
        self.config_dir = config_dir or default_config_dir()
        self.logger = logging.getLogger(__name__)
        self._properties = PropertiesConfigurator()
        self._scenarios: Dict[str, Dict[str, Any]] = {}
        self._load_properties()
        self._load_scenarios()

    def _load_properties(self):
        for key, value in DEFAULT_PROPERTIES.items():
            if self._properties.get_source(key) != 'file':
                self._properties.set(key, value)
        path = os.path.join(self.config_dir, 'application.properties')
        if os.path.exists(path):
            self._properties.load_properties(path)
            self.logger.debug(f"Loaded properties from {path}")
        else:
            self.logger.warning(f"Properties file not found: {path}")

    def _load_scenarios(self):
        path = os.path.join(self.config_dir, 'scenarios.json')
        if not os.path.exists(path):
            self.logger.warning(f"Scenario registry not found: {path}")
            self._scenarios = {}
            return
        with open(path, 'r', encoding='utf-8') as f:
            registry = json.load(f)
        self._scenarios = {entry['name']: entry for entry in registry.get('scenarios', [])}
        self.logger.debug(f"Loaded {len(self._scenarios)} scenarios from {path}")

    def get_property(self, key: str, default: Optional[str] = None) -> Optional[str]:
        return self._properties.get(key, default)

    def get_int_property(self, key: str, default: int = 0) -> int:
        return self._properties.get_int(key, default)

    def get_float_property(self, key: str, default: float = 0.0) -> float:
        return self._properties.get_float(key, default)

    def get_bool_property(self, key: str, default: bool = False) -> bool:
        return self._properties.get_bool(key, default)

    def list_scenarios(self) -> List[str]:
        return list(self._scenarios.keys())

    def get_scenario(self, name: str) -> Optional[Dict[str, Any]]:
        """A deep copy of the registered scenario document, or None."""
        entry = self._scenarios.get(name)
        return copy.deepcopy(entry) if entry is not None else None

    def get_all_scenarios(self) -> Dict[str, Dict[str, Any]]:
        return copy.deepcopy(self._scenarios)

    def output_root(self, override: Optional[str] = None) -> str:
        """--out, then CRFLOW_OUT (environment or properties), then ./crflow_out."""
        if override:
            return override
        return self._properties.get('CRFLOW_OUT') or DEFAULT_OUTPUT_ROOT

    def reload(self):
        self._load_properties()
        self._load_scenarios()
        self.logger.info("Configuration reloaded")

    def __repr__(self) -> str:
        return f"<ConfigLoader(config_dir={self.config_dir!r}, scenarios={len(self._scenarios)})>"
