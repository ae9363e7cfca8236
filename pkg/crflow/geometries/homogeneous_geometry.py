"""
Homogeneous Geometry Class
Left-invariant metrics on compact 3-dimensional groups as a flow geometry class

© 2025-2030 All rights reserved Ashutosh Sinha
email: ajsinha@gmail.com
"""

from typing import Any

import numpy as np

from ..flowcore.flow_types import FlowConfig, ReferenceKind
from ..flowcore.geometry_class import GeometryClass
from ..flowcore.tensors import (
    CurvatureData,
    GaugeTerm,
    InvertibilityReport,
    PressureField,
    SymmetricTwoTensor,
    TensorRole,
)
from .homogeneous import (
    FRAME_WEIGHTS,
    HomogeneousMetric,
    curvature_homogeneous,
    invertibility_estimate_homogeneous,
    pressure_homogeneous,
)


class HomogeneousGeometry(GeometryClass):
    """
    Geometry class for HomogeneousMetric.

    The flow reduces to ODEs for ln g_i. The pressure is spatially constant and
    the DeTurck term is returned as zero: 𝓛_W g of a left-invariant W has no
    diagonal part in the frame.
    """

    def __init__(self, geometry_kind: str = 'homogeneous'):
        super().__init__(geometry_kind)

    def accepts(self, metric: Any) -> bool:
        return isinstance(metric, HomogeneousMetric)

    def curvature(self, metric: HomogeneousMetric, s0: float) -> CurvatureData:
        return curvature_homogeneous(metric, s0)

    def pressure(self, metric: HomogeneousMetric, curvature: CurvatureData,
                 config: FlowConfig) -> PressureField:
        return pressure_homogeneous(curvature.deviation_norm_sq, config.s0)

    def gauge_term(self, metric: HomogeneousMetric, reference: HomogeneousMetric) -> GaugeTerm:
        zero = SymmetricTwoTensor(np.zeros(3), FRAME_WEIGHTS, TensorRole.GAUGE_TERM)
        return GaugeTerm(field=0.0, lie_derivative=zero)

    def reference_metric(self, initial: HomogeneousMetric, kind: ReferenceKind) -> HomogeneousMetric:
        if kind is ReferenceKind.INITIAL:
            return initial
        return HomogeneousMetric(np.ones(3), initial.structure_constants)

    def invertibility(self, metric: HomogeneousMetric, s0: float) -> InvertibilityReport:
        return invertibility_estimate_homogeneous(metric, s0)

    def pack(self, metric: HomogeneousMetric) -> np.ndarray:
        return np.log(metric.coeffs)

    def unpack(self, state: np.ndarray, template: HomogeneousMetric) -> HomogeneousMetric:
        return template.with_log_coeffs(state)

    def state_rate(self, metric: HomogeneousMetric, rhs: SymmetricTwoTensor) -> np.ndarray:
        return np.asarray(rhs.components, dtype=float).copy()

    def time_step(self, metric: HomogeneousMetric, dt_safety: float) -> float:
        return dt_safety * float(np.min(metric.coeffs)) / (2.0 * metric.dimension)

    def volume_density(self, metric: HomogeneousMetric) -> np.ndarray:
        return np.atleast_1d(0.5 * np.sum(np.log(metric.coeffs)))
