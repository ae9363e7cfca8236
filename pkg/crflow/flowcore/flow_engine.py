"""
Flow Engine
Right-hand sides of the conformal, DeTurck-conformal and plain Ricci flows and
their classical Runge-Kutta integration

© 2025-2030 All rights reserved Ashutosh Sinha
email: ajsinha@gmail.com
"""

from dataclasses import dataclass
from typing import Any, Callable, Optional
import logging
import math

import numpy as np

from .exceptions import (
    ConstraintViolation,
    InvalidMetric,
    NonInvertibleOperator,
    NumericalBreakdown,
    UnsupportedGeometry,
    ensure_finite,
)
from .flow_types import (
    FlowConfig,
    FlowKind,
    FlowState,
    FlowTrajectory,
    TerminationStatus,
)
from .geometry_class import GeometryClass
from .geometry_factory import GeometryFactory, geometry_for
from .tensors import (
    CurvatureData,
    GaugeTerm,
    PressureField,
    PressureStatus,
    SymmetricTwoTensor,
    TensorRole,
)

logger = logging.getLogger(__name__)


def _pressure_values(p) -> Any:
    return p.values if isinstance(p, PressureField) else p


def crf_rhs(g, p, s0: float, curvature: Optional[CurvatureData] = None) -> SymmetricTwoTensor:
    """∂g/∂t = -2(Ric - (s0/m)g) - 2pg."""
    curvature = curvature or geometry_for(g).curvature(g, s0)
    E = curvature.deviation
    unit = SymmetricTwoTensor.identity_like(E)
    rhs = E * -2.0 - unit * (2.0 * np.asarray(_pressure_values(p)))
    return rhs.with_role(TensorRole.METRIC_PERTURBATION)


def dtcrf_rhs(g, p, s0: float, g_ref, curvature: Optional[CurvatureData] = None,
              gauge: Optional[GaugeTerm] = None) -> SymmetricTwoTensor:
    """crf_rhs + 𝓛_W g with W the DeTurck field of g against g_ref."""
    gauge = gauge or geometry_for(g).gauge_term(g, g_ref)
    rhs = crf_rhs(g, p, s0, curvature) + gauge.lie_derivative.with_role(TensorRole.METRIC_PERTURBATION)
    return rhs


def ricci_rhs(g, g_ref=None, curvature: Optional[CurvatureData] = None,
              gauge: Optional[GaugeTerm] = None) -> SymmetricTwoTensor:
    """∂g/∂t = -2 Ric, plus 𝓛_W g when a reference metric is supplied."""
    geometry = geometry_for(g)
    curvature = curvature or geometry.curvature(g, 0.0)
    rhs = (curvature.ric * -2.0).with_role(TensorRole.METRIC_PERTURBATION)
    if g_ref is not None:
        gauge = gauge or geometry.gauge_term(g, g_ref)
        rhs = rhs + gauge.lie_derivative.with_role(TensorRole.METRIC_PERTURBATION)
    return rhs


@dataclass(frozen=True)
class StageEvaluation:
    """Everything one right-hand-side evaluation produces."""
    metric: Any
    curvature: CurvatureData
    pressure: PressureField
    gauge: Optional[GaugeTerm]
    rhs: SymmetricTwoTensor
    rate: np.ndarray


class FlowEngine:
    """
    Integrates one configured flow with classical RK4.

    The pressure is re-solved at every stage so each stage works with a
    consistent (g, p) pair. The last stage evaluation of a step is the first
    of the next one.
    """

    def __init__(self, config: FlowConfig, geometry: Optional[GeometryClass] = None):
        """
        Initialize the engine.

        Args:
            config: Flow configuration
            geometry: Geometry class (defaults to the registered one for config.geometry_kind)
        """
        self.config = config
        self.geometry = geometry or GeometryFactory().get_geometry(config.geometry_kind)
        self.logger = logging.getLogger(f"{__name__}.{config.flow_kind.value}")
        self.reference = None

    def _zero_pressure(self, metric) -> PressureField:
        size = getattr(getattr(metric, 'grid', None), 'n_nodes', None)
        values = np.zeros(size) if size else 0.0
        return PressureField(values=values, residual_norm=0.0, status=PressureStatus.OK)

    def evaluate(self, metric) -> StageEvaluation:
        """
        Curvature, pressure, gauge term, ∂g/∂t and the state rate at a metric.

        Raises:
            NonInvertibleOperator: From the pressure solve
            NumericalBreakdown: On non-finite values
        """
        config = self.config
        curvature = self.geometry.curvature(metric, config.s0)
        gauge = self.geometry.gauge_term(metric, self.reference) if config.gauged else None

        if config.flow_kind is FlowKind.RICCI:
            pressure = self._zero_pressure(metric)
            rhs = ricci_rhs(metric, curvature=curvature, gauge=gauge,
                            g_ref=self.reference if config.gauged else None)
        else:
            pressure = self.geometry.pressure(metric, curvature, config)
            if config.flow_kind is FlowKind.DTCRF:
                rhs = dtcrf_rhs(metric, pressure, config.s0, self.reference, curvature, gauge)
            else:
                rhs = crf_rhs(metric, pressure, config.s0, curvature)

        rate = ensure_finite(self.geometry.state_rate(metric, rhs), "flow rate")
        return StageEvaluation(metric, curvature, pressure, gauge, rhs, rate)

    def _advance(self, state: np.ndarray, template) -> Any:
        ensure_finite(state, "flow state")
        try:
            return self.geometry.unpack(state, template)
        except InvalidMetric as e:
            raise NumericalBreakdown(f"Metric left the admissible set: {e}") from e

    def step_count(self, g0) -> int:
        if self.config.n_steps is not None:
            return int(self.config.n_steps)
        dt0 = self.geometry.time_step(g0, self.config.dt_safety)
        return max(1, math.ceil(self.config.t_end / dt0 - 1e-9))

    def _state(self, t: float, step: int, ev: StageEvaluation) -> FlowState:
        field = ev.gauge.field if ev.gauge is not None else None
        return FlowState(t=t, metric=ev.metric, pressure=ev.pressure, curvature=ev.curvature,
                         gauge_field=field, step=step)

    def run(self, g0, recorder: Optional[Callable[[FlowState], Any]] = None) -> FlowTrajectory:
        """
        Integrate from g0 to t_end and return the recorded trajectory.

        NonInvertibleOperator and NumericalBreakdown raised mid-run end the run
        with the matching termination status; the frames so far are kept.
        """
        config = self.config
        self.reference = self.geometry.reference_metric(g0, config.reference_metric)
        n_steps = self.step_count(g0)
        dt = config.t_end / n_steps
        self.logger.info(f"Starting {config.flow_kind.value} run: {n_steps} steps, dt={dt:.4e}, "
                         f"pressure source {config.pressure_source.value}")

        trajectory = FlowTrajectory(config=config)

        def record(t, step, ev):
            state = self._state(t, step, ev)
            trajectory.append(state, recorder(state) if recorder else None)

        step = 0
        try:
            ev = self.evaluate(g0)
            record(0.0, 0, ev)
            u = self.geometry.pack(g0)
            for step in range(1, n_steps + 1):
                k1 = ev.rate
                k2 = self.evaluate(self._advance(u + 0.5 * dt * k1, g0)).rate
                k3 = self.evaluate(self._advance(u + 0.5 * dt * k2, g0)).rate
                k4 = self.evaluate(self._advance(u + dt * k3, g0)).rate
                u = u + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
                ev = self.evaluate(self._advance(u, g0))
                if step % config.output_stride == 0 or step == n_steps:
                    record(step * dt, step, ev)
        except NonInvertibleOperator as e:
            self.logger.error(f"Pressure failure at step {step}: {e}")
            trajectory.termination = TerminationStatus.PRESSURE_FAILURE
            trajectory.message = str(e)
        except NumericalBreakdown as e:
            self.logger.error(f"Numerical breakdown at step {step}: {e}")
            trajectory.termination = TerminationStatus.NUMERICAL_BREAKDOWN
            trajectory.message = str(e)
        else:
            self.logger.info(f"Run completed: {n_steps} steps, {len(trajectory)} frames")
        return trajectory


def run_flow(config: FlowConfig, g0, recorder: Optional[Callable[[FlowState], Any]] = None,
             record_diagnostics: bool = True) -> FlowTrajectory:
    """
    Check the initial data and integrate the configured flow.

    Args:
        config: Flow configuration
        g0: Initial metric of config.geometry_kind
        recorder: Per-frame diagnostics callback (defaults to a FrameRecorder)
        record_diagnostics: Build the default recorder when none is given

    Raises:
        UnsupportedGeometry: If g0 does not belong to the configured class
        ConstraintViolation: If s[g0] differs from s0 for crf/dtcrf
        NonInvertibleOperator: If the pressure operator of g0 is not invertible
    """
    geometry = GeometryFactory().get_geometry(config.geometry_kind)
    if not geometry.accepts(g0):
        raise UnsupportedGeometry(
            f"{type(g0).__name__} is not a {config.geometry_kind.value} metric"
        )

    report = None
    if config.flow_kind is not FlowKind.RICCI:
        curvature = geometry.curvature(g0, config.s0)
        if not geometry.constraint_satisfied(curvature, config.constraint_tolerance):
            raise ConstraintViolation(
                f"Initial scalar curvature misses s0={config.s0}: "
                f"max|s - s0| = {geometry.constraint_residual(curvature):.3e}"
            )
        report = geometry.invertibility(g0, config.s0)
        if report.status is PressureStatus.FAILED:
            raise NonInvertibleOperator("Pressure operator of the initial metric is not invertible")
        if report.status is PressureStatus.NEAR_RESONANT:
            logger.warning(f"Initial pressure operator is near resonance (sigma_min={report.sigma_min:.3e}); "
                           f"continuing")

    if recorder is None and record_diagnostics:
        from ..diagnostics.records import FrameRecorder
        recorder = FrameRecorder()

    trajectory = FlowEngine(config, geometry).run(g0, recorder)
    trajectory.invertibility = report.to_dict() if report is not None else None
    if recorder is not None and hasattr(recorder, 'finalize'):
        recorder.finalize(trajectory)
    return trajectory
