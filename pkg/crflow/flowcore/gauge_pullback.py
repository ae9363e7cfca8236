"""
Gauge Pull-Back
Recovers a conformal Ricci flow trajectory from a DeTurck-gauged one

© 2025-2030 All rights reserved Ashutosh Sinha
email: ajsinha@gmail.com

If ĝ(t) solves the gauged flow, g(t) = φ_t* ĝ(t) solves the ungauged one,
where ∂ₜφ_t(x) = -W(φ_t(x), t) and φ_0(x) = x. In the radial class φ acts
on x = ln ρ only, and for x̂ = φ(x)

    A(x) = Â(x̂) e^(x̂ - x) φ'(x),    B(x) = B̂(x̂) e^(x̂ - x)
"""

from dataclasses import replace
from typing import Any, Callable, List, Optional
import logging

import numpy as np
from scipy.interpolate import CubicSpline

from .exceptions import OutOfDomain
from .flow_types import FlowKind, FlowState, FlowTrajectory, TerminationStatus
from .geometry_factory import GeometryFactory

logger = logging.getLogger(__name__)


def _characteristics(trajectory: FlowTrajectory, substeps: int):
    """
    Integrate the gauge ODE node by node with RK4 across the recorded frames.

    Yields (frame index, φ at that frame); W is cubic in x and linear in t between frames.
    """
    states = trajectory.states
    x = states[0].metric.grid.x
    splines = [CubicSpline(x, np.asarray(s.gauge_field, dtype=float)) for s in states]
    xi = x.copy()
    yield 0, xi.copy()

    for k in range(len(states) - 1):
        t0, t1 = states[k].t, states[k + 1].t
        span = t1 - t0

        def velocity(points, t):
            theta = (t - t0) / span
            return -((1.0 - theta) * splines[k](points) + theta * splines[k + 1](points))

        dt = span / substeps
        for j in range(substeps):
            t = t0 + j * dt
            k1 = velocity(xi, t)
            k2 = velocity(xi + 0.5 * dt * k1, t + 0.5 * dt)
            k3 = velocity(xi + 0.5 * dt * k2, t + 0.5 * dt)
            k4 = velocity(xi + dt * k3, t + dt)
            xi = xi + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        yield k + 1, xi.copy()


def pull_back_radial(metric, xi: np.ndarray, pressure: Optional[np.ndarray] = None):
    """Pull a radial metric (and pressure) back along x ↦ ξ(x)."""
    grid = metric.grid
    x = grid.x
    d1, _ = metric.plain_operators()
    d_xi = 1.0 + d1.linear(xi - x)

    log_A = CubicSpline(x, metric.log_A)(xi) + (xi - x) + np.log(d_xi)
    log_B = CubicSpline(x, metric.log_B)(xi) + (xi - x)
    pulled = metric.with_log_profiles(log_A, log_B)
    pulled_p = CubicSpline(x, pressure)(xi) if pressure is not None else None
    return pulled, pulled_p


def gauge_pullback(trajectory: FlowTrajectory, substeps: int = 4, strict: bool = False,
                   recorder: Optional[Callable[[FlowState], Any]] = None) -> FlowTrajectory:
    """
    Pull every frame of a gauged trajectory back to the ungauged gauge.

    Args:
        trajectory: Trajectory of a dtcrf run (W stored per frame)
        substeps: RK4 substeps per frame interval
        strict: Raise OutOfDomain instead of truncating
        recorder: Per-frame diagnostics callback for the pulled-back frames

    Raises:
        ValueError: If the trajectory is not gauged
        OutOfDomain: In strict mode, if a characteristic leaves [rho_min, rho_max]
    """
    config = trajectory.config
    if not config.gauged:
        raise ValueError(f"Gauge pull-back needs a gauged trajectory, got {config.flow_kind.value}")

    result = FlowTrajectory(config=replace(config, flow_kind=FlowKind.CRF if config.flow_kind is FlowKind.DTCRF
                                           else config.flow_kind, ricci_gauge=False),
                            termination=trajectory.termination, message=trajectory.message,
                            invertibility=trajectory.invertibility)
    if not trajectory.states:
        return result

    geometry = GeometryFactory().for_metric(trajectory.states[0].metric)
    if geometry.get_geometry_kind() != 'radial_af':
        # W vanishes identically, so φ_t is the identity
        for state in trajectory.states:
            result.append(replace(state, gauge_field=None), recorder(state) if recorder else None)
        if recorder is not None and hasattr(recorder, 'finalize'):
            recorder.finalize(result)
        return result

    grid = trajectory.states[0].metric.grid
    x = grid.x
    tolerance = 0.5 * grid.log_step
    s0 = config.s0

    for k, xi in _characteristics(trajectory, substeps):
        state = trajectory.states[k]
        low, high = float(np.min(xi)), float(np.max(xi))
        if low < x[0] - tolerance or high > x[-1] + tolerance:
            message = (f"Gauge characteristic left [{grid.rho_min}, {grid.rho_max}] "
                       f"(ρ range [{np.exp(low):.4g}, {np.exp(high):.4g}]) at t={state.t:.4e}")
            if strict:
                raise OutOfDomain(message, time=state.t)
            logger.warning(f"{message}; truncating pulled-back trajectory")
            result.termination = TerminationStatus.OUT_OF_DOMAIN
            result.message = message
            break

        xi = np.clip(xi, x[0], x[-1])
        metric, pressure = pull_back_radial(state.metric, xi, np.asarray(state.pressure.values))
        curvature = geometry.curvature(metric, s0)
        pulled = FlowState(t=state.t, metric=metric,
                           pressure=replace(state.pressure, values=pressure),
                           curvature=curvature, gauge_field=None, step=state.step)
        result.append(pulled, recorder(pulled) if recorder else None)

    logger.info(f"Pulled back {len(result)} of {len(trajectory)} frames")
    if recorder is not None and hasattr(recorder, 'finalize'):
        recorder.finalize(result)
    return result
