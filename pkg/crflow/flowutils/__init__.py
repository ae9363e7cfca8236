"""
crflow - Utilities Module
Configuration, scenario documents and the scenario runner

© 2025-2030 All rights reserved Ashutosh Sinha
email: ajsinha@gmail.com
"""

from .config_loader import ConfigLoader
from .properties_configurator import PropertiesConfigurator
from .system_initializer import FlowSystem, initialize_system
from .scenario import Scenario, emit_schema, list_scenarios, load_scenario, parse_config
from .runner import RunResult, run_scenario, run_sweep

__all__ = [
    'ConfigLoader',
    'PropertiesConfigurator',
    'FlowSystem',
    'initialize_system',
    'Scenario',
    'emit_schema',
    'list_scenarios',
    'load_scenario',
    'parse_config',
    'RunResult',
    'run_scenario',
    'run_sweep',
]
