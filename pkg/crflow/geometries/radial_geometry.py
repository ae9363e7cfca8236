"""
Radial Geometry Class
Asymptotically flat rotationally symmetric metrics as a flow geometry class

© 2025-2030 All rights reserved Ashutosh Sinha
email: ajsinha@gmail.com
"""

from typing import Any

import numpy as np

from ..flowcore.flow_types import FlowConfig, PressureSource, ReferenceKind
from ..flowcore.geometry_class import GeometryClass
from ..flowcore.tensors import (
    CurvatureData,
    GaugeTerm,
    InvertibilityReport,
    PressureField,
    SymmetricTwoTensor,
)
from .radial import (
    InnerClosure,
    RadialMetric,
    deturck_gauge_term_radial,
    ricci_radial,
)
from .radial_pressure import invertibility_estimate_radial, solve_pressure_radial


class RadialGeometry(GeometryClass):
    """
    Geometry class for RadialMetric.

    The state vector is (ln A, ln B). The pressure solves (m-1)Δp + s0·p = -|E|²
    unless the run opts into the linearized source, which solves against the
    discrete linearization of s along E with the current s as potential.
    """

    def __init__(self, geometry_kind: str = 'radial_af'):
        super().__init__(geometry_kind)

    def accepts(self, metric: Any) -> bool:
        return isinstance(metric, RadialMetric)

    def curvature(self, metric: RadialMetric, s0: float) -> CurvatureData:
        return ricci_radial(metric, s0)

    def pressure(self, metric: RadialMetric, curvature: CurvatureData,
                 config: FlowConfig) -> PressureField:
        if config.pressure_source is PressureSource.LINEARIZED:
            return solve_pressure_radial(metric, config.s0, curvature.constraint_source,
                                         np.asarray(curvature.scalar))
        return solve_pressure_radial(metric, config.s0, -np.asarray(curvature.deviation_norm_sq))

    def gauge_term(self, metric: RadialMetric, reference: RadialMetric) -> GaugeTerm:
        return deturck_gauge_term_radial(metric, reference)

    def reference_metric(self, initial: RadialMetric, kind: ReferenceKind) -> RadialMetric:
        if kind is ReferenceKind.INITIAL:
            return initial
        return RadialMetric.euclidean(initial.grid, InnerClosure.REFLECT, initial.outer)

    def invertibility(self, metric: RadialMetric, s0: float) -> InvertibilityReport:
        return invertibility_estimate_radial(metric, s0)

    def pack(self, metric: RadialMetric) -> np.ndarray:
        return np.concatenate([metric.log_A, metric.log_B])

    def unpack(self, state: np.ndarray, template: RadialMetric) -> RadialMetric:
        n = template.grid.n_nodes
        return template.with_log_profiles(state[:n], state[n:])

    def state_rate(self, metric: RadialMetric, rhs: SymmetricTwoTensor) -> np.ndarray:
        return 0.5 * np.concatenate([rhs.components[0], rhs.components[1]])

    def time_step(self, metric: RadialMetric, dt_safety: float) -> float:
        spacing = float(np.min(metric.proper_spacing()))
        return dt_safety * spacing ** 2 / (2.0 * metric.dimension)

    def volume_density(self, metric: RadialMetric) -> np.ndarray:
        return metric.log_A + (metric.dimension - 1) * metric.log_B

    def constraint_satisfied(self, curvature: CurvatureData, tolerance: float) -> bool:
        # relative to the curvature scale, since s is only O(h⁴) accurate near a throat
        scale = 1.0 + float(np.max(np.abs(curvature.ric.components)))
        return self.constraint_residual(curvature) <= tolerance * scale
