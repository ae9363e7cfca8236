"""
Linearization Probe
Dense finite-difference Jacobian of the flow right-hand side

© 2025-2030 All rights reserved Ashutosh Sinha
email: ajsinha@gmail.com
"""

from dataclasses import dataclass
from typing import List, Optional
import logging

import numpy as np
from scipy import linalg

from ..flowcore.flow_engine import FlowEngine
from ..flowcore.flow_types import FlowConfig, FlowKind, GeometryKind, ReferenceKind
from ..geometries.homogeneous import HomogeneousMetric

logger = logging.getLogger(__name__)

MAX_PROBE_DOF = 200


@dataclass(frozen=True)
class SpectrumReport:
    """
    Eigenvalues of the state-rate Jacobian.

    Attributes:
        size: Number of state degrees of freedom
        max_real: Largest real part
        min_real: Most negative real part
        all_real: Whether every eigenvalue is real up to 1e-8 of the spectral radius
        leading: The n_modes most negative eigenvalues (real parts)
        step_consistency: max |J(ε) - J(ε/2)| / max |J(ε)|
    """
    size: int
    max_real: float
    min_real: float
    all_real: bool
    leading: List[float]
    step_consistency: float

    def to_dict(self) -> dict:
        return {'size': self.size, 'max_real': self.max_real, 'min_real': self.min_real,
                'all_real': self.all_real, 'leading': self.leading,
                'step_consistency': self.step_consistency}


def _jacobian(engine: FlowEngine, g, epsilon: float) -> np.ndarray:
    geometry = engine.geometry
    u = geometry.pack(g)
    columns = []
    for j in range(u.size):
        shift = np.zeros_like(u)
        shift[j] = epsilon
        plus = engine.evaluate(geometry.unpack(u + shift, g)).rate
        minus = engine.evaluate(geometry.unpack(u - shift, g)).rate
        columns.append((plus - minus) / (2.0 * epsilon))
    return np.column_stack(columns)


def fd_jacobian_probe(g, s0: float = 0.0, g_ref=None, n_modes: Optional[int] = 4,
                      flow_kind: FlowKind = FlowKind.DTCRF,
                      epsilon: float = 1e-6) -> SpectrumReport:
    """
    Central-difference Jacobian of the state rate and its spectrum.

    Args:
        g: Homogeneous metric or coarse radial metric
        s0: Target scalar curvature
        g_ref: DeTurck reference (defaults to g itself)
        n_modes: Number of most negative eigenvalues reported
        flow_kind: Flow whose right-hand side is linearized
        epsilon: Difference step in the state variables (log metric coefficients)

    Raises:
        ValueError: If the state is too large for a dense Jacobian
    """
    geometry_kind = GeometryKind.HOMOGENEOUS if isinstance(g, HomogeneousMetric) else GeometryKind.RADIAL_AF
    config = FlowConfig(flow_kind=flow_kind, geometry_kind=geometry_kind, s0=s0,
                        reference_metric=ReferenceKind.INITIAL)
    engine = FlowEngine(config)
    engine.reference = g_ref if g_ref is not None else g

    size = engine.geometry.pack(g).size
    if size > MAX_PROBE_DOF:
        raise ValueError(f"Dense Jacobian of {size} unknowns exceeds {MAX_PROBE_DOF}")

    J = _jacobian(engine, g, epsilon)
    J_half = _jacobian(engine, g, 0.5 * epsilon)
    scale = max(float(np.max(np.abs(J))), 1e-300)
    consistency = float(np.max(np.abs(J - J_half))) / scale

    eigenvalues = linalg.eigvals(J)
    radius = max(float(np.max(np.abs(eigenvalues))), 1e-300)
    real = np.sort(eigenvalues.real)
    all_real = bool(np.max(np.abs(eigenvalues.imag)) <= 1e-8 * radius)
    logger.debug(f"Jacobian probe: size={size}, min real={real[0]:.4e}, max real={real[-1]:.4e}")
    return SpectrumReport(
        size=size,
        max_real=float(real[-1]),
        min_real=float(real[0]),
        all_real=all_real,
        leading=[float(v) for v in real[:n_modes or size]],
        step_consistency=consistency,
    )
