"""
crflow - Core Module
Value types, geometry-class abstraction, registry and the flow engine

© 2025-2030 All rights reserved Ashutosh Sinha
email: ajsinha@gmail.com
"""

from .exceptions import (
    CRFlowError,
    InvalidGrid,
    InvalidMetric,
    ConstraintViolation,
    IncompatibleReference,
    UnsupportedGeometry,
    NumericalBreakdown,
    NonInvertibleOperator,
    OutOfDomain,
    InsufficientDecay,
    ConfigError,
)
from .tensors import (
    TensorRole,
    SymmetricTwoTensor,
    CurvatureData,
    PressureStatus,
    PressureField,
    InvertibilityReport,
    GaugeTerm,
)
from .flow_types import (
    FlowKind,
    GeometryKind,
    ReferenceKind,
    PressureSource,
    TerminationStatus,
    FlowConfig,
    FlowState,
    FlowTrajectory,
)
from .geometry_class import GeometryClass
from .geometry_factory import GeometryFactory, geometry_for
from .flow_engine import FlowEngine, crf_rhs, dtcrf_rhs, ricci_rhs, run_flow
from .gauge_pullback import gauge_pullback

__all__ = [
    'CRFlowError', 'InvalidGrid', 'InvalidMetric', 'ConstraintViolation', 'IncompatibleReference',
    'UnsupportedGeometry', 'NumericalBreakdown', 'NonInvertibleOperator', 'OutOfDomain',
    'InsufficientDecay', 'ConfigError',
    'TensorRole', 'SymmetricTwoTensor', 'CurvatureData', 'PressureStatus', 'PressureField',
    'InvertibilityReport', 'GaugeTerm',
    'FlowKind', 'GeometryKind', 'ReferenceKind', 'PressureSource', 'TerminationStatus',
    'FlowConfig', 'FlowState', 'FlowTrajectory',
    'GeometryClass', 'GeometryFactory', 'geometry_for',
    'FlowEngine', 'crf_rhs', 'dtcrf_rhs', 'ricci_rhs', 'run_flow',
    'gauge_pullback',
]
