"""
Properties Configurator
Layered key=value settings for the flow runner

© 2025-2030 All rights reserved Ashutosh Sinha
email: ajsinha@gmail.com
"""

import os
from typing import Dict, List, Optional, Sequence


class PropertiesConfigurator:
    """
    Singleton holding runner settings with precedence rules.

    Precedence (highest first):
    1. --key=value overrides passed to apply_overrides()
    2. Environment variables
    3. Properties files, later files overriding earlier ones
    """

    _instance = None
    _properties: Dict[str, str] = {}
    _overrides: Dict[str, str] = {}

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(PropertiesConfigurator, cls).__new__(cls)
        return cls._instance

    def apply_overrides(self, argv: Sequence[str]) -> List[str]:
        """
        Take --key=value pairs out of argv.

        Only dotted or upper-case keys count as property overrides, so regular
        options such as --out=DIR are left for the argument parser.

        Returns:
            The remaining arguments
        """
        remaining = []
        for arg in argv:
            if arg.startswith('--') and '=' in arg:
                key, value = arg[2:].split('=', 1)
                key = key.strip()
                if '.' in key or key.isupper():
                    self._overrides[key] = value.strip()
                    continue
            remaining.append(arg)
        return remaining

    def load_properties(self, filepath: str) -> None:
        """
        Load one file or a comma-separated list of files.

        Raises:
            FileNotFoundError: If any listed file is missing (nothing is loaded then)
        """
        paths = [p.strip() for p in filepath.split(',') if p.strip()]
        missing = [p for p in paths if not os.path.exists(p)]
        if missing:
            raise FileNotFoundError(f"Properties file not found: {missing[0]}")
        for path in paths:
            self._properties.update(self._read(path))

    @staticmethod
    def _read(path: str) -> Dict[str, str]:
        values = {}
        with open(path, 'r', encoding='utf-8') as f:
            for line in f:
                line = line.strip()
                if not line or line.startswith('#') or '=' not in line:
                    continue
                key, value = line.split('=', 1)
                value = value.strip()
                if len(value) >= 2 and value[0] == value[-1] and value[0] in ('"', "'"):
                    value = value[1:-1]
                values[key.strip()] = value
        return values

    def get(self, key: str, default: Optional[str] = None) -> Optional[str]:
        if key in self._overrides:
            return self._overrides[key]
        env_value = os.environ.get(key)
        if env_value is not None:
            return env_value
        return self._properties.get(key, default)

    def get_int(self, key: str, default: int = 0) -> int:
        value = self.get(key)
        try:
            return int(value) if value is not None else default
        except ValueError:
            return default

    def get_float(self, key: str, default: float = 0.0) -> float:
        value = self.get(key)
        try:
            return float(value) if value is not None else default
        except ValueError:
            return default

    def get_bool(self, key: str, default: bool = False) -> bool:
        """true, yes, 1 and on (any case) read as True."""
        value = self.get(key)
        if value is None:
            return default
        return value.lower() in ('true', 'yes', '1', 'on')

    def get_list(self, key: str, separator: str = ',', default: Optional[List[str]] = None) -> List[str]:
        value = self.get(key)
        if value is None:
            return list(default or [])
        return [item.strip() for item in value.split(separator) if item.strip()]

    def set(self, key: str, value: str) -> None:
        """File-level value; overrides and environment still win."""
        self._properties[key] = value

    def has_property(self, key: str) -> bool:
        return self.get(key) is not None

    def get_source(self, key: str) -> Optional[str]:
        """'override', 'env', 'file' or None."""
        if key in self._overrides:
            return 'override'
        if os.environ.get(key) is not None:
            return 'env'
        if key in self._properties:
            return 'file'
        return None

    def clear(self) -> None:
        """Forget file values and overrides (used by tests)."""
        self._properties.clear()
        self._overrides.clear()
