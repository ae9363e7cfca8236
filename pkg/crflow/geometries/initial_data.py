"""
Initial Data
Model metrics the flow experiments start from

© 2025-2030 All rights reserved Ashutosh Sinha
email: ajsinha@gmail.com
"""

from typing import Callable, Optional, Sequence, Union
import logging

import numpy as np
from ..flowcore.exceptions import InvalidGrid, InvalidMetric
from .homogeneous import HomogeneousMetric, milnor_structure_constants
from .radial import InnerClosure, OuterClosure, RadialGrid, RadialMetric

logger = logging.getLogger(__name__)

Metric = Union[RadialMetric, HomogeneousMetric]


def flat(grid: RadialGrid, closure: InnerClosure = InnerClosure.REFLECT) -> RadialMetric:
    """Euclidean metric; carries tau = m-2 so the mass ladder extrapolates to zero."""
    ones = np.ones(grid.n_nodes)
    return RadialMetric(grid, ones, ones.copy(), float(grid.dimension - 2), closure, OuterClosure.TAIL)


def conformally_flat(grid: RadialGrid, w: Union[Callable[[np.ndarray], np.ndarray], np.ndarray],
                     tau: Optional[float] = None,
                     closure: InnerClosure = InnerClosure.ONE_SIDED) -> RadialMetric:
    """g = w^(4/(m-2)) g_e, i.e. A = B = w^(2/(m-2))."""
    m = grid.dimension
    values = w(grid.nodes) if callable(w) else np.asarray(w, dtype=float)
    if np.any(values <= 0):
        raise InvalidMetric("Conformal factor must be positive")
    profile = values ** (2.0 / (m - 2))
    return RadialMetric(grid, profile, profile.copy(), tau, closure, OuterClosure.TAIL)


def throat_radius(A0: float, m: int = 3) -> float:
    """Minimal sphere of the Schwarzschild-conformal slice, (A0/2)^(1/(m-2))."""
    return (A0 / 2.0) ** (1.0 / (m - 2))


def schwarzschild_conformal(grid: RadialGrid, A0: float,
                            closure: InnerClosure = InnerClosure.THROAT) -> RadialMetric:
    """
    Time-symmetric Schwarzschild slice w^(4/(m-2)) g_e with w = 1 + A0/(2ρ^(m-2)).

    The slice is inversion symmetric about ρ = (A0/2)^(1/(m-2)), so the throat
    closure requires the grid to start exactly there.

    Raises:
        InvalidMetric: If A0 <= 0
        InvalidGrid: If the throat closure is requested on a grid not starting at the throat
    """
    if not A0 > 0:
        raise InvalidMetric(f"Schwarzschild coefficient must be positive, got {A0}")
    m = grid.dimension
    closure = InnerClosure(closure)
    if closure is InnerClosure.THROAT:
        _check_throat(grid, A0)

    def w(rho):
        return 1.0 + A0 / (2.0 * rho ** (m - 2))

    return conformally_flat(grid, w, tau=float(m - 2), closure=closure)


def _check_throat(grid: RadialGrid, A0: float):
    throat = throat_radius(A0, grid.dimension)
    if not np.isclose(grid.rho_min, throat, rtol=1e-10, atol=0.0):
        raise InvalidGrid(f"Throat closure needs rho_min = {throat:.12g}, got {grid.rho_min}")


def perturbed_schwarzschild(grid: RadialGrid, A0: float = 0.1, amplitude: float = 0.1,
                            center: float = 1.0, width: float = 0.5) -> RadialMetric:
    """
    Schwarzschild slice in a radial coordinate carrying a bump in ln B.

    The isotropic slice is pulled back by ρ ↦ φ(ρ) with, in x = ln(ρ/ρ_throat),

        ln(φ/ρ_throat) = x + amplitude·[e^(-((x-c)/width)²) - e^(-((x+c)/width)²)]

    and c = ln(center/ρ_throat). The map commutes with the inversion about the
    throat, so the throat closure still applies, and it is the identity far out,
    so the tail and the mass 4·A0 are those of schwarzschild_conformal. The
    metric is scalar flat and not conformally flat in these coordinates:
    A = P(φ)·φ', B = P(φ)·φ/ρ with P the isotropic profile.

    Raises:
        InvalidMetric: If A0 <= 0, or the bump makes φ' vanish
        InvalidGrid: If the grid does not start at the throat
    """
    if not A0 > 0:
        raise InvalidMetric(f"Schwarzschild coefficient must be positive, got {A0}")
    if not width > 0:
        raise InvalidMetric(f"Bump width must be positive, got {width}")
    m = grid.dimension
    _check_throat(grid, A0)
    rho_t = throat_radius(A0, m)
    c = np.log(center / rho_t)

    x = grid.x - np.log(rho_t)
    right = np.exp(-((x - c) / width) ** 2)
    left = np.exp(-((x + c) / width) ** 2)
    u = x + amplitude * (right - left)
    du = 1.0 + amplitude * (-2.0 * (x - c) * right + 2.0 * (x + c) * left) / width ** 2
    if np.any(du <= 0.0):
        raise InvalidMetric(f"Bump amplitude {amplitude} with width {width} folds the spheres")

    phi = rho_t * np.exp(u)
    profile = (1.0 + A0 / (2.0 * phi ** (m - 2))) ** (2.0 / (m - 2))
    B = profile * np.exp(u - x)
    logger.debug(f"Perturbed Schwarzschild: A0={A0}, amplitude={amplitude}, max|ln B bump|="
                 f"{float(np.max(np.abs(u - x))):.3e}")
    return RadialMetric(grid, B * du, B, float(m - 2), InnerClosure.THROAT, OuterClosure.TAIL)


def injected_tail(grid: RadialGrid, amplitude: float, power: float,
                  tau: Optional[float] = None) -> RadialMetric:
    """A = B = 1 + amplitude·ρ^(-power); used to probe decay checks."""
    profile = 1.0 + amplitude * grid.nodes ** (-power)
    return RadialMetric(grid, profile, profile.copy(), tau, InnerClosure.ONE_SIDED, OuterClosure.ONE_SIDED)


def round_homogeneous(scale: float = 1.0) -> HomogeneousMetric:
    """scale times the round metric of curvature 1 (s = 6/scale, vol = 2π² scale^(3/2))."""
    return HomogeneousMetric.round(scale)


def squashed_homogeneous(triple: Sequence[float] = (1.0, 1.0, 2.0),
                         lambdas: Sequence[float] = (2.0, 2.0, 2.0)) -> HomogeneousMetric:
    return HomogeneousMetric(np.asarray(triple, dtype=float), milnor_structure_constants(lambdas))


def rescale_metric(g: Metric, factor: float) -> Metric:
    """factor·g; curvature scales by 1/factor and flow time by factor."""
    if not factor > 0:
        raise InvalidMetric(f"Scale factor must be positive, got {factor}")
    return g.scaled(factor)
