"""
Flow System Initializer
Sets up logging, configuration and the geometry registry

© 2025-2030 All rights reserved Ashutosh Sinha
email: ajsinha@gmail.com
"""

import logging
from typing import List, Optional

from ..flowcore.geometry_factory import GeometryFactory
from .config_loader import ConfigLoader
from .properties_configurator import PropertiesConfigurator

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


class FlowSystem:
    """
    Process-wide entry point for the command-line runner.

    Holds the ConfigLoader and the GeometryFactory and configures logging once.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(FlowSystem, cls).__new__(cls)
            cls._instance._initialized = False
        return cls._instance

    def __init__(self):
        if not self._initialized:
            self.logger = logging.getLogger(__name__)
            self.config_loader: Optional[ConfigLoader] = None
            self.geometry_factory: Optional[GeometryFactory] = None

    def initialize(self, config_dir: Optional[str] = None, log_level: Optional[str] = None):
        """
        Args:
            config_dir: Directory with application.properties and scenarios.json
            log_level: DEBUG, INFO, WARNING, ERROR or CRITICAL; when omitted
                CRFLOW_LOG_LEVEL from the environment or properties is used
        """
        if self._initialized:
            self.logger.debug("Flow system already initialized")
            return

        self._setup_logging(log_level or PropertiesConfigurator().get('CRFLOW_LOG_LEVEL', 'INFO'))
        self.config_loader = ConfigLoader(config_dir)
        if log_level is None:
            self._set_level(self.config_loader.get_property('CRFLOW_LOG_LEVEL', 'INFO'))
        self.geometry_factory = GeometryFactory()
        self._initialized = True
        self.logger.info(f"Flow system initialized with geometries "
                         f"{self.geometry_factory.get_available_geometries()}")

    @staticmethod
    def _set_level(log_level: str):
        logging.getLogger().setLevel(getattr(logging, str(log_level).upper(), logging.INFO))

    def _setup_logging(self, log_level: str):
        logging.basicConfig(
            level=getattr(logging, str(log_level).upper(), logging.INFO),
            format=LOG_FORMAT,
            handlers=[logging.StreamHandler()],
        )
        self._set_level(log_level)

    def _require(self):
        if not self._initialized:
            raise RuntimeError("Flow system not initialized. Call initialize() first.")

    def list_geometries(self) -> List[str]:
        self._require()
        return self.geometry_factory.get_available_geometries()

    def list_scenarios(self) -> List[str]:
        self._require()
        return self.config_loader.list_scenarios()

    def output_root(self, override: Optional[str] = None) -> str:
        self._require()
        return self.config_loader.output_root(override)

    def is_initialized(self) -> bool:
        return self._initialized

    @classmethod
    def reset(cls):
        """Drop the singleton so the next initialize() starts afresh."""
        cls._instance = None

    def __repr__(self) -> str:
        status = "initialized" if self._initialized else "not initialized"
        return f"<FlowSystem({status})>"


def initialize_system(config_dir: Optional[str] = None, log_level: Optional[str] = None) -> FlowSystem:
    system = FlowSystem()
    system.initialize(config_dir, log_level)
    return system
