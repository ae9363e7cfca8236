"""
Radial Pressure Solver
Banded solve of (m-1)Δp + V p = f on a radial grid

© 2025-2030 All rights reserved Ashutosh Sinha
email: ajsinha@gmail.com

Rows are equilibrated by a² so the second-derivative stencil dominates.
At rho_max the ghost values follow the ρ^(2-m) tail, which is the discrete
form of the Robin condition p' + (m-2)p/ρ = 0. At rho_min the pressure is
even (throat/reflect closures) or satisfies a one-sided Neumann row.
"""

from typing import Optional, Tuple
import logging

import numpy as np
from scipy import sparse
from scipy.linalg import get_lapack_funcs, solve_banded, LinAlgError

from ..flowcore.exceptions import NonInvertibleOperator, ensure_finite
from ..flowcore.tensors import InvertibilityReport, PressureField, PressureStatus
from .radial import InnerClosure, RadialMetric

logger = logging.getLogger(__name__)

PIVOT_TOLERANCE = 1e-12
RESIDUAL_TOLERANCE = 1e-10
RESONANCE_TOLERANCE = 1e-6


def pressure_operator(g: RadialMetric, s0: float = 0.0,
                      potential: Optional[np.ndarray] = None) -> Tuple[sparse.csr_matrix, np.ndarray, bool]:
    """
    Row-equilibrated discrete operator a²[(m-1)Δ + V].

    Args:
        g: Radial metric
        s0: Zeroth-order coefficient when no potential is given
        potential: Pointwise zeroth-order coefficient V (defaults to s0)

    Returns:
        Tuple of (matrix, row scale a², whether row 0 is a Neumann row)
    """
    jet = g.jet
    n = g.dimension - 1
    d1, d2 = g.scalar_operators()
    V = np.full(g.grid.n_nodes, float(s0)) if potential is None else np.asarray(potential, dtype=float)

    advection = sparse.diags(n * jet.d_beta - jet.d_alpha)
    matrix = (n * (d2.matrix + advection @ d1.matrix) + sparse.diags(jet.a2 * V)).tolil()
    row_scale = jet.a2.copy()

    neumann = g.closure is InnerClosure.ONE_SIDED
    if neumann:
        matrix[0, :] = d1.matrix[0, :].toarray()
        row_scale[0] = 1.0
    return matrix.tocsr(), row_scale, neumann


def to_band(matrix: sparse.spmatrix) -> Tuple[int, int, np.ndarray]:
    """LAPACK band storage ab[u + i - j, j] = a_ij."""
    coo = matrix.tocoo()
    lower = int(max(0, np.max(coo.row - coo.col)))
    upper = int(max(0, np.max(coo.col - coo.row)))
    ab = np.zeros((lower + upper + 1, matrix.shape[1]))
    np.add.at(ab, (upper + coo.row - coo.col, coo.col), coo.data)
    return lower, upper, ab


def _band_solve(lower: int, upper: int, ab: np.ndarray, rhs: np.ndarray):
    """Gaussian elimination with partial pivoting; returns solution and min |U_ii|."""
    gbsv, = get_lapack_funcs(('gbsv',), (ab, rhs))
    work = np.zeros((2 * lower + upper + 1, ab.shape[1]), dtype=gbsv.dtype)
    work[lower:, :] = ab
    lu, _, x, info = gbsv(lower, upper, work, rhs.copy())
    if info < 0:
        raise ValueError(f"Illegal value in argument {-info} of band solve")
    diagonal = np.abs(lu[lower + upper, :])
    return x, float(np.min(diagonal)), info


def solve_pressure_radial(g: RadialMetric, s0: float, source: np.ndarray,
                          potential: Optional[np.ndarray] = None) -> PressureField:
    """
    Solve (m-1)Δp + V p = source with V = s0 unless a potential is supplied.

    Raises:
        NonInvertibleOperator: If a pivot falls below 1e-12 times the matrix scale
        NumericalBreakdown: On non-finite inputs or outputs
    """
    source = ensure_finite(np.asarray(source, dtype=float), "pressure source")
    matrix, row_scale, neumann = pressure_operator(g, s0, potential)
    ensure_finite(matrix.data, "pressure operator")

    rhs = row_scale * source
    if neumann:
        rhs[0] = 0.0

    lower, upper, ab = to_band(matrix)
    scale = float(np.max(np.abs(ab)))
    p, min_pivot, info = _band_solve(lower, upper, ab, rhs)
    if info > 0 or min_pivot < PIVOT_TOLERANCE * scale:
        raise NonInvertibleOperator(
            f"Pressure band solve hit pivot {min_pivot:.3e} (scale {scale:.3e})"
        )
    p = ensure_finite(p, "pressure")

    residual = float(np.max(np.abs(matrix @ p - rhs) / row_scale))
    status = PressureStatus.OK
    bound = RESIDUAL_TOLERANCE * (1.0 + float(np.max(np.abs(source))))
    if residual > bound:
        logger.warning(f"Pressure residual {residual:.3e} exceeds {bound:.3e}")
        status = PressureStatus.NEAR_RESONANT

    logger.debug(f"Pressure solve: n={g.grid.n_nodes}, residual={residual:.3e}, pivot={min_pivot:.3e}")
    return PressureField(values=p, residual_norm=residual, status=status,
                         min_pivot=min_pivot / scale)


def invertibility_estimate_radial(g: RadialMetric, s0: float = 0.0,
                                  max_iterations: int = 500,
                                  tolerance: float = 1e-12) -> InvertibilityReport:
    """
    Smallest singular value of the equilibrated operator by inverse iteration on LᵀL.

    Each iteration applies L⁻¹ and L⁻ᵀ through banded solves.
    """
    matrix, _, _ = pressure_operator(g, s0)
    lower, upper, ab = to_band(matrix)
    lower_t, upper_t, ab_t = to_band(matrix.T.tocsr())
    scale = (g.dimension - 1) + abs(s0) * float(np.max(g.jet.a2))

    n = matrix.shape[0]
    v = np.ones(n) + np.linspace(0.0, 1.0, n)
    v /= np.linalg.norm(v)
    growth = 0.0
    iteration = 0
    try:
        for iteration in range(1, max_iterations + 1):
            w = solve_banded((lower, upper), ab, v)
            z = solve_banded((lower_t, upper_t), ab_t, w)
            new_growth = float(np.linalg.norm(z))
            v = z / new_growth
            if abs(new_growth - growth) <= tolerance * new_growth:
                growth = new_growth
                break
            growth = new_growth
    except (LinAlgError, ValueError) as e:
        logger.warning(f"Inverse iteration failed: {e}")
        return InvertibilityReport(0.0, scale, PressureStatus.FAILED, 'inverse-iteration', iteration)

    sigma_min = 1.0 / np.sqrt(growth) if growth > 0 else 0.0
    status = PressureStatus.OK
    if sigma_min < RESONANCE_TOLERANCE * scale:
        status = PressureStatus.NEAR_RESONANT
        logger.warning(f"Pressure operator near resonance: sigma_min={sigma_min:.3e}")
    return InvertibilityReport(float(sigma_min), float(scale), status, 'inverse-iteration', iteration)
