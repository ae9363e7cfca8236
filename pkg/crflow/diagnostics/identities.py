"""
Identity Checks
Residuals of the evolution identities along recorded trajectories

© 2025-2030 All rights reserved Ashutosh Sinha
email: ajsinha@gmail.com

Time derivatives are second-order three-point differences over the recorded
frames (non-uniform spacing allowed), so every residual carries an O(Δt²)
contribution from the frame spacing.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence
import logging

import numpy as np

from ..flowcore.exceptions import UnsupportedGeometry
from ..flowcore.flow_engine import crf_rhs
from ..flowcore.flow_types import FlowKind, FlowTrajectory
from ..flowcore.geometry_factory import geometry_for
from ..geometries.homogeneous import HomogeneousMetric, ricci_evolution_rhs
from ..geometries.radial import RadialMetric, radial_laplacian, scalar_curvature_linearization
from .functionals import adm_mass, sphere_area, total_norm, volume, yamabe_quotient

logger = logging.getLogger(__name__)


def frame_derivative(times: np.ndarray, values: Sequence, k: int):
    """d/dt at interior frame k by the three-point formula on a non-uniform mesh."""
    h1 = times[k] - times[k - 1]
    h2 = times[k + 1] - times[k]
    previous, current, following = (np.asarray(values[j], dtype=float) for j in (k - 1, k, k + 1))
    return (-h2 / (h1 * (h1 + h2)) * previous
            + (h2 - h1) / (h1 * h2) * current
            + h1 / (h2 * (h1 + h2)) * following)


def _require_frames(trajectory: FlowTrajectory, minimum: int = 3):
    if len(trajectory) < minimum:
        raise ValueError(f"Identity checks need at least {minimum} frames, got {len(trajectory)}")


def _safe_ratio(numerator: float, scale: float) -> float:
    return numerator / scale if scale > 1e-300 else numerator


# -- volume ------------------------------------------------------------------


@dataclass(frozen=True)
class VolumeIdentityReport:
    """
    ∂ₜ log dvol = -(s - s0) - mp pointwise, and for homogeneous runs with
    s0 ≠ 0 the global form d vol/dt = (m/s0) ∫|E|² dvol.

    constraint_terms holds max|s - s0| per frame. The pointwise residual
    includes that term, so what is left is the frame-difference error.
    """
    frame_residuals: List[Optional[float]]
    max_residual: float
    global_residuals: List[Optional[float]] = field(default_factory=list)
    max_global_residual: Optional[float] = None
    global_skipped: bool = True
    constraint_terms: List[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {'max_residual': self.max_residual, 'max_global_residual': self.max_global_residual,
                'max_constraint_term': max(self.constraint_terms, default=None),
                'global_skipped': self.global_skipped}


def volume_identity_check(trajectory: FlowTrajectory) -> VolumeIdentityReport:
    """
    Raises:
        ValueError: If the trajectory is not a crf run or has fewer than 3 frames
    """
    if trajectory.config.flow_kind is not FlowKind.CRF:
        raise ValueError("Volume identity holds for crf trajectories only")
    _require_frames(trajectory)
    states = trajectory.states
    geometry = geometry_for(states[0].metric)
    m = states[0].metric.dimension
    s0 = trajectory.config.s0
    times = trajectory.times
    densities = [geometry.volume_density(s.metric) for s in states]
    # tr E = s - s0 with s the trace of the discrete Ricci tensor
    drifts = [np.asarray(s.curvature.deviation.trace(), dtype=float) for s in states]

    residuals: List[Optional[float]] = [None] * len(states)
    for k in range(1, len(states) - 1):
        rate = frame_derivative(times, densities, k)
        p = np.asarray(states[k].pressure.values, dtype=float)
        residuals[k] = float(np.max(np.abs(rate + drifts[k] + m * p)))
    max_residual = max(r for r in residuals if r is not None)

    global_residuals: List[Optional[float]] = [None] * len(states)
    skipped = not (isinstance(states[0].metric, HomogeneousMetric) and s0 != 0)
    max_global = None
    if not skipped:
        volumes = [volume(s.metric) for s in states]
        for k in range(1, len(states) - 1):
            expected = m / s0 * total_norm(states[k].metric, states[k].curvature.deviation_norm_sq).value
            global_residuals[k] = float(abs(frame_derivative(times, volumes, k) - expected))
        max_global = max(r for r in global_residuals if r is not None)
    constraint_terms = [float(np.max(np.abs(d))) for d in drifts]
    return VolumeIdentityReport(residuals, float(max_residual), global_residuals, max_global, skipped,
                                constraint_terms)


# -- mass --------------------------------------------------------------------


@dataclass(frozen=True)
class MassDerivativeReport:
    """
    dm/dt against -2∫|Ric|² dvol / ω_{m-1} (crf, dtcrf) or 0 (ricci), per interior frame.

    Relative residuals are measured against 2∫|Ric|² dvol / ω_{m-1}.
    """
    times: List[float]
    masses: List[float]
    rates: List[float]
    expected: List[float]
    relative_residuals: List[float]
    max_relative_residual: float
    monotone_decreasing: bool
    max_relative_mass_change: float

    def to_dict(self) -> dict:
        return {
            'max_relative_residual': self.max_relative_residual,
            'monotone_decreasing': self.monotone_decreasing,
            'max_relative_mass_change': self.max_relative_mass_change,
            'initial_mass': self.masses[0] if self.masses else None,
            'final_mass': self.masses[-1] if self.masses else None,
        }


def mass_derivative_check(trajectory: FlowTrajectory,
                          radii: Optional[Sequence[float]] = None) -> MassDerivativeReport:
    """
    Raises:
        UnsupportedGeometry: For homogeneous trajectories
        ValueError: If τ lies outside ((m-2)/2, m-2] or there are fewer than 3 frames
        InsufficientDecay: Propagated from the mass extrapolation
    """
    _require_frames(trajectory)
    states = trajectory.states
    g0 = states[0].metric
    if not isinstance(g0, RadialMetric):
        raise UnsupportedGeometry("Mass identity applies to asymptotically flat runs")
    m = g0.dimension
    tau = g0.tau
    if tau is None or not (m - 2) / 2.0 < tau <= m - 2:
        raise ValueError(f"Decay order {tau} outside (({m}-2)/2, {m}-2]")

    omega = sphere_area(m)
    times = trajectory.times
    masses = [adm_mass(s.metric, radii).mass for s in states]
    ricci_norms = [total_norm(s.metric, s.curvature.ric_norm_sq).value for s in states]
    ricci_flow = trajectory.config.flow_kind is FlowKind.RICCI

    rates, expected, residuals = [], [], []
    for k in range(1, len(states) - 1):
        rate = float(frame_derivative(times, masses, k))
        scale = 2.0 * ricci_norms[k] / omega
        target = 0.0 if ricci_flow else -scale
        rates.append(rate)
        expected.append(target)
        residuals.append(_safe_ratio(abs(rate - target), scale))

    differences = np.diff(masses)
    reference = abs(masses[0]) if masses[0] != 0 else 1.0
    return MassDerivativeReport(
        times=[float(t) for t in times[1:-1]],
        masses=[float(v) for v in masses],
        rates=rates,
        expected=expected,
        relative_residuals=residuals,
        max_relative_residual=float(max(residuals)),
        monotone_decreasing=bool(np.all(differences < 0)),
        max_relative_mass_change=float(np.max(np.abs(np.asarray(masses) - masses[0])) / reference),
    )


# -- curvature ---------------------------------------------------------------


@dataclass(frozen=True)
class CurvatureEvolutionReport:
    """
    Residuals of the scalar (both classes) and Ricci (homogeneous) evolution identities.

    scalar_residuals compare ∂ₜs over the frames with the rate the discrete
    flow gives s (the Jacobian of the discrete s along the crf right-hand side
    in the radial class), so they shrink with the frame spacing alone.
    formula_residuals compare against the continuum identity and also carry
    the spatial discretization error.
    """
    scalar_residuals: List[float]
    scalar_relative_residuals: List[float]
    max_scalar_residual: float
    max_scalar_relative_residual: float
    ricci_residuals: List[float] = field(default_factory=list)
    max_ricci_residual: Optional[float] = None
    formula_residuals: List[float] = field(default_factory=list)
    max_formula_residual: Optional[float] = None

    def to_dict(self) -> dict:
        return {'max_scalar_residual': self.max_scalar_residual,
                'max_scalar_relative_residual': self.max_scalar_relative_residual,
                'max_formula_residual': self.max_formula_residual,
                'max_ricci_residual': self.max_ricci_residual}


def scalar_evolution_rhs(state, s0: float):
    """Δs + 2(s0/m)(s-s0) + 2p(s-s0) + 2(m-1)Δp + 2s0p + 2|E|²."""
    g = state.metric
    m = g.dimension
    s = np.asarray(state.curvature.scalar, dtype=float)
    p = np.asarray(state.pressure.values, dtype=float)
    E2 = np.asarray(state.curvature.deviation_norm_sq, dtype=float)
    if isinstance(g, RadialMetric):
        lap_s = radial_laplacian(g, s)
        lap_p = radial_laplacian(g, p)
    else:
        lap_s = lap_p = 0.0
    return (lap_s + 2.0 * s0 / m * (s - s0) + 2.0 * p * (s - s0)
            + 2.0 * (m - 1) * lap_p + 2.0 * s0 * p + 2.0 * E2)


def curvature_evolution_check(trajectory: FlowTrajectory) -> CurvatureEvolutionReport:
    """
    Raises:
        ValueError: If the trajectory is not a crf run or has fewer than 3 frames
    """
    if trajectory.config.flow_kind is not FlowKind.CRF:
        raise ValueError("Curvature identities are checked on crf trajectories")
    _require_frames(trajectory)
    states = trajectory.states
    s0 = trajectory.config.s0
    times = trajectory.times
    scalars = [np.asarray(s.curvature.scalar, dtype=float) for s in states]

    absolute, relative, formula = [], [], []
    for k in range(1, len(states) - 1):
        rate = frame_derivative(times, scalars, k)
        expected = scalar_evolution_rhs(states[k], s0)
        formula.append(float(np.max(np.abs(rate - expected))))
        if isinstance(states[k].metric, RadialMetric):
            state = states[k]
            expected = scalar_curvature_linearization(
                state.metric, crf_rhs(state.metric, state.pressure, s0, state.curvature))
        residual = float(np.max(np.abs(rate - expected)))
        scale = 2.0 * float(np.max(states[k].curvature.deviation_norm_sq))
        absolute.append(residual)
        relative.append(_safe_ratio(residual, scale))

    ricci_residuals: List[float] = []
    max_ricci = None
    if isinstance(states[0].metric, HomogeneousMetric):
        # coordinate components g_i R̂_i in the fixed frame
        coordinate = [s.metric.coeffs * s.curvature.ric.components for s in states]
        for k in range(1, len(states) - 1):
            g = states[k].metric
            rate = frame_derivative(times, coordinate, k)
            expected = g.coeffs * np.diag(ricci_evolution_rhs(g))
            ricci_residuals.append(float(np.max(np.abs(rate - expected))))
        max_ricci = max(ricci_residuals)

    return CurvatureEvolutionReport(absolute, relative, float(max(absolute)), float(max(relative)),
                                    ricci_residuals, max_ricci, formula, float(max(formula)))


# -- Yamabe quotient ---------------------------------------------------------


@dataclass(frozen=True)
class QMonotonicityReport:
    """Q along a homogeneous run; dQ/dt against 2 vol^(2/m-1) ∫|E|² dvol."""
    values: List[float]
    strictly_increasing: bool
    rates: List[float]
    expected: List[float]
    residuals: List[float]
    max_residual: float

    def to_dict(self) -> dict:
        return {'strictly_increasing': self.strictly_increasing, 'max_residual': self.max_residual,
                'initial_Q': self.values[0], 'final_Q': self.values[-1]}


def q_monotonicity_check(trajectory: FlowTrajectory) -> QMonotonicityReport:
    """
    Raises:
        UnsupportedGeometry: For radial trajectories
    """
    _require_frames(trajectory)
    states = trajectory.states
    if not isinstance(states[0].metric, HomogeneousMetric):
        raise UnsupportedGeometry("Yamabe quotient is tracked in the homogeneous class only")
    m = states[0].metric.dimension
    times = trajectory.times
    values = [yamabe_quotient(s.metric, float(s.curvature.scalar)) for s in states]

    rates, expected, residuals = [], [], []
    for k in range(1, len(states) - 1):
        g = states[k].metric
        vol = volume(g)
        target = 2.0 * vol ** (2.0 / m - 1.0) * total_norm(g, states[k].curvature.deviation_norm_sq).value
        rate = float(frame_derivative(times, values, k))
        rates.append(rate)
        expected.append(float(target))
        residuals.append(abs(rate - target))

    return QMonotonicityReport(
        values=[float(v) for v in values],
        strictly_increasing=bool(np.all(np.diff(values) > 0)),
        rates=rates,
        expected=expected,
        residuals=residuals,
        max_residual=float(max(residuals)),
    )


# -- scaling -----------------------------------------------------------------


@dataclass(frozen=True)
class ScalingReport:
    """Discrepancy between a run from c·g0 and the rescaled run c·g(t/c)."""
    factor: float
    frames: int
    max_metric_discrepancy: float
    max_pressure_discrepancy: float
    max_time_discrepancy: float

    def to_dict(self) -> dict:
        return {'factor': self.factor, 'frames': self.frames,
                'max_metric_discrepancy': self.max_metric_discrepancy,
                'max_pressure_discrepancy': self.max_pressure_discrepancy}


def _metric_components(g) -> np.ndarray:
    if isinstance(g, HomogeneousMetric):
        return g.coeffs
    return np.concatenate([g.A ** 2, g.B ** 2])


def scaling_check(trajectory: FlowTrajectory, scaled: FlowTrajectory, factor: float) -> ScalingReport:
    """
    Compare frame by frame: scaled must hold factor·g at time factor·t with
    pressure p/factor. Both runs must use the same step count and stride.
    """
    if len(trajectory) != len(scaled):
        raise ValueError(f"Frame counts differ: {len(trajectory)} vs {len(scaled)}")
    metric_err, pressure_err, time_err = 0.0, 0.0, 0.0
    for original, rescaled in zip(trajectory.states, scaled.states):
        expected = factor * _metric_components(original.metric)
        actual = _metric_components(rescaled.metric)
        metric_err = max(metric_err, float(np.max(np.abs(actual - expected) / np.abs(expected))))

        p_expected = np.asarray(original.pressure.values, dtype=float) / factor
        p_actual = np.asarray(rescaled.pressure.values, dtype=float)
        p_scale = max(float(np.max(np.abs(p_expected))), 1e-14)
        pressure_err = max(pressure_err, float(np.max(np.abs(p_actual - p_expected))) / p_scale)

        time_err = max(time_err, abs(rescaled.t - factor * original.t) / max(abs(factor * original.t), 1e-300))
    return ScalingReport(float(factor), len(trajectory), metric_err, pressure_err, time_err)
