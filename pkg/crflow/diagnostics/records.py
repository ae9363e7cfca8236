"""
Diagnostics Records
Per-frame functionals recorded along a trajectory

© 2025-2030 All rights reserved Ashutosh Sinha
email: ajsinha@gmail.com
"""

from dataclasses import dataclass, asdict
from typing import Any, Dict, List, Optional, Sequence
import logging

import numpy as np

from ..flowcore.exceptions import InsufficientDecay
from ..flowcore.flow_types import FlowKind, FlowState, FlowTrajectory
from ..geometries.homogeneous import HomogeneousMetric
from .functionals import adm_mass, total_norm, volume, yamabe_quotient

logger = logging.getLogger(__name__)

TIMESERIES_COLUMNS = (
    't', 's_min', 's_max', 'constraint_drift', 'vol', 'Q', 'mass', 'mass_err',
    'ric_l2', 'dev_l2', 'theta_check_residual',
)

COLUMN_DOCS = {
    't': 'flow time',
    's_min': 'minimum of the scalar curvature',
    's_max': 'maximum of the scalar curvature',
    'constraint_drift': 'max |s - s0| over the grid',
    'vol': 'total volume (homogeneous class only)',
    'Q': 'Yamabe quotient s vol^(2/m) (homogeneous class only)',
    'mass': 'extrapolated ADM mass, normalization 1/omega_{m-1} (radial class only)',
    'mass_err': 'spread of the mass extrapolants (radial class only)',
    'ric_l2': 'integral of |Ric|^2 dvol (radial: truncated at rho_max)',
    'dev_l2': 'integral of |Ric - (s0/m) g|^2 dvol',
    'theta_check_residual': 'max |d/dt log dvol + m p| by central differences (crf runs, interior frames)',
}


@dataclass
class DiagnosticsRecord:
    """Functionals of one recorded frame."""
    t: float
    s_min: float
    s_max: float
    constraint_drift: float
    constraint_change: float = 0.0
    vol: Optional[float] = None
    Q: Optional[float] = None
    mass: Optional[float] = None
    mass_err: Optional[float] = None
    ric_l2: float = 0.0
    dev_l2: float = 0.0
    theta_check: Optional[float] = None
    tail_bound: Optional[float] = None

    def to_row(self) -> Dict[str, Any]:
        """Time-series row; undefined columns are None."""
        row = {name: getattr(self, name) for name in TIMESERIES_COLUMNS if name != 'theta_check_residual'}
        row['theta_check_residual'] = self.theta_check
        return row

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


class FrameRecorder:
    """
    Callable that turns each FlowState into a DiagnosticsRecord.

    finalize() fills the volume-identity residual once the whole trajectory is
    known, since it needs neighbouring frames.
    """

    def __init__(self, mass_radii: Optional[Sequence[float]] = None):
        self.mass_radii = None if mass_radii is None else list(mass_radii)
        self.logger = logging.getLogger(__name__)
        self._initial_scalar = None

    def __call__(self, state: FlowState) -> DiagnosticsRecord:
        g = state.metric
        curvature = state.curvature
        scalar = np.atleast_1d(np.asarray(curvature.scalar, dtype=float))
        if state.step == 0 or self._initial_scalar is None or self._initial_scalar.shape != scalar.shape:
            self._initial_scalar = scalar.copy()

        record = DiagnosticsRecord(
            t=float(state.t),
            s_min=float(np.min(scalar)),
            s_max=float(np.max(scalar)),
            constraint_drift=float(np.max(np.abs(scalar - curvature.s0))),
            constraint_change=float(np.max(np.abs(scalar - self._initial_scalar))),
        )

        ric = total_norm(g, curvature.ric_norm_sq)
        dev = total_norm(g, curvature.deviation_norm_sq)
        record.ric_l2 = ric.value
        record.dev_l2 = dev.value
        record.tail_bound = ric.tail_bound

        if isinstance(g, HomogeneousMetric):
            record.vol = volume(g)
            record.Q = yamabe_quotient(g, float(curvature.scalar))
        else:
            try:
                estimate = adm_mass(g, self.mass_radii)
                record.mass, record.mass_err = estimate.mass, estimate.error
            except (InsufficientDecay, ValueError) as e:
                self.logger.warning(f"Mass at t={state.t:.4e} unavailable: {e}")
                record.mass, record.mass_err = float('nan'), float('nan')
        return record

    def finalize(self, trajectory: FlowTrajectory):
        if trajectory.config.flow_kind is not FlowKind.CRF or len(trajectory) < 3:
            return
        if len(trajectory.diagnostics) != len(trajectory.states):
            return
        from .identities import volume_identity_check
        report = volume_identity_check(trajectory)
        for record, residual in zip(trajectory.diagnostics, report.frame_residuals):
            record.theta_check = residual


def records_to_rows(records: List[DiagnosticsRecord]) -> List[Dict[str, Any]]:
    return [r.to_row() for r in records]
