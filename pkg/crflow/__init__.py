"""
crflow
Conformal Ricci flow on radial asymptotically flat and homogeneous 3-dimensional metrics

© 2025-2030 All rights reserved Ashutosh Sinha
email: ajsinha@gmail.com

This package provides:
- Conformal, DeTurck-conformal and plain Ricci flow integration
- Pressure solves with invertibility estimates
- ADM mass, Yamabe quotient and identity checks along trajectories
- JSON scenarios with CSV/JSON outputs and a command-line runner
"""

from .flowcore import (
    CRFlowError,
    ConfigError,
    FlowConfig,
    FlowEngine,
    FlowKind,
    FlowTrajectory,
    GeometryFactory,
    GeometryKind,
    crf_rhs,
    dtcrf_rhs,
    gauge_pullback,
    ricci_rhs,
    run_flow,
)
from .geometries import (
    HomogeneousMetric,
    RadialMetric,
    build_radial_grid,
    curvature_homogeneous,
    deturck_gauge_term,
    operator_G_and_divergence,
    ricci_radial,
    solve_pressure_radial,
)
from .diagnostics import (
    adm_mass,
    asymptotic_flatness_check,
    curvature_evolution_check,
    fd_jacobian_probe,
    mass_derivative_check,
    volume_identity_check,
    yamabe_quotient,
)
from .flowutils import FlowSystem, initialize_system, parse_config, run_scenario

__version__ = '1.0.0'
__author__ = 'Ashutosh Sinha'
__email__ = 'ajsinha@gmail.com'
__copyright__ = '© 2025-2030 All rights reserved Ashutosh Sinha'

__all__ = [
    # Core
    'CRFlowError', 'ConfigError', 'FlowConfig', 'FlowEngine', 'FlowKind', 'FlowTrajectory',
    'GeometryFactory', 'GeometryKind', 'crf_rhs', 'dtcrf_rhs', 'gauge_pullback', 'ricci_rhs', 'run_flow',

    # Geometry
    'HomogeneousMetric', 'RadialMetric', 'build_radial_grid', 'curvature_homogeneous',
    'deturck_gauge_term', 'operator_G_and_divergence', 'ricci_radial', 'solve_pressure_radial',

    # Diagnostics
    'adm_mass', 'asymptotic_flatness_check', 'curvature_evolution_check', 'fd_jacobian_probe',
    'mass_derivative_check', 'volume_identity_check', 'yamabe_quotient',

    # Utilities
    'FlowSystem', 'initialize_system', 'parse_config', 'run_scenario',

    # Metadata
    '__version__', '__author__', '__email__', '__copyright__',
]
