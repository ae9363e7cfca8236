"""
Geometric Functionals
Volume, Yamabe quotient, ADM mass and decay checks

© 2025-2030 All rights reserved Ashutosh Sinha
email: ajsinha@gmail.com

The ADM mass uses the normalization m(g) = ω_{m-1}⁻¹ ∮ (∂ᵢg_ij - ∂_j g_ii) n^j dσ
without the conventional 1/(2(m-1)) factor. For the radial ansatz the sphere
integral is analytic:

    m(R) = (m-1) R^(m-1) [ (A² - B²)/R - d(B²)/dρ ]
"""

from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Tuple, Union
import logging

import numpy as np
from scipy.integrate import simpson
from scipy.interpolate import CubicSpline
from scipy.optimize import curve_fit
from scipy.special import gamma

from ..flowcore.exceptions import InsufficientDecay, UnsupportedGeometry
from ..geometries.homogeneous import HomogeneousMetric, volume_homogeneous
from ..geometries.radial import RadialMetric

logger = logging.getLogger(__name__)

MASS_SPREAD_TOLERANCE = 0.1
MASS_ZERO_TOLERANCE = 1e-4
SLOPE_TOLERANCE = 0.2


def sphere_area(m: int) -> float:
    """ω_{m-1}, the area of the unit (m-1)-sphere."""
    return float(2.0 * np.pi ** (m / 2.0) / gamma(m / 2.0))


# -- volume functionals ------------------------------------------------------


def volume(g: HomogeneousMetric) -> float:
    if not isinstance(g, HomogeneousMetric):
        raise UnsupportedGeometry("Volume is infinite on asymptotically flat grids")
    return volume_homogeneous(g)


def yamabe_quotient(g: HomogeneousMetric, scalar: Optional[float] = None) -> float:
    """
    Q = ∫ s dvol / vol^((m-2)/m) = s·vol^(2/m) for constant s.

    Raises:
        UnsupportedGeometry: For radial metrics
    """
    if not isinstance(g, HomogeneousMetric):
        raise UnsupportedGeometry("Yamabe quotient needs a compact geometry class")
    if scalar is None:
        from ..geometries.homogeneous import curvature_homogeneous
        scalar = curvature_homogeneous(g).scalar
    m = g.dimension
    return float(scalar * volume_homogeneous(g) ** (2.0 / m))


@dataclass(frozen=True)
class VolumeIntegral:
    """∫ f dvol over the grid with a bound on the truncated tail."""
    value: float
    tail_bound: float
    tail_exponent: Optional[float] = None


def volume_integral(g: RadialMetric, density: np.ndarray) -> VolumeIntegral:
    """
    ∫ f dvol over [rho_min, rho_max] by Simpson's rule in x = ln ρ.

    The tail beyond rho_max is bounded by fitting |f|·dvol/dx ~ C e^(-qx) on
    the outer decade, which integrates to C e^(-q x_max)/q.
    """
    grid = g.grid
    m = g.dimension
    weight = sphere_area(m) * g.A * g.B ** (m - 1) * grid.nodes ** m
    integrand = np.asarray(density, dtype=float) * weight
    value = float(simpson(integrand, x=grid.x))

    tail = grid.outer_decade()
    magnitude = np.abs(integrand[tail])
    if np.all(magnitude <= 1e-300):
        return VolumeIntegral(value, 0.0, None)
    positive = magnitude > 1e-300
    slope, intercept = np.polyfit(grid.x[tail][positive], np.log(magnitude[positive]), 1)
    q = -float(slope)
    if q <= 0:
        logger.warning(f"Integrand does not decay on the outer decade (exponent {q:.3f})")
        return VolumeIntegral(value, float('inf'), q)
    bound = float(np.exp(intercept - q * grid.x[-1]) / q)
    return VolumeIntegral(value, bound, q)


def total_norm(g, norm_sq) -> VolumeIntegral:
    """∫ |T|² dvol for either geometry class (exact for homogeneous metrics)."""
    if isinstance(g, HomogeneousMetric):
        return VolumeIntegral(float(norm_sq) * volume_homogeneous(g), 0.0, None)
    return volume_integral(g, norm_sq)


# -- ADM mass ----------------------------------------------------------------


@dataclass(frozen=True)
class MassEstimate:
    """
    Extrapolated ADM mass.

    Attributes:
        mass: Estimate from the outermost extrapolant
        error: Spread of the extrapolants (or fit standard error)
        radii: Ladder of sphere radii
        values: m(R) at each radius
        extrapolants: Richardson extrapolants of consecutive pairs
        tau: Decay exponent used
        fitted: True when tau was unknown and fitted with the mass
    """
    mass: float
    error: float
    radii: Tuple[float, ...]
    values: Tuple[float, ...]
    extrapolants: Tuple[float, ...] = field(default_factory=tuple)
    tau: Optional[float] = None
    fitted: bool = False

    def to_dict(self) -> dict:
        return {
            'mass': self.mass,
            'error': self.error,
            'radii': list(self.radii),
            'values': list(self.values),
            'extrapolants': list(self.extrapolants),
            'tau': self.tau,
            'fitted': self.fitted,
        }


def default_mass_radii(g: RadialMetric, count: int = 5) -> np.ndarray:
    """Geometric ladder over the outer two decades, kept off the last few nodes."""
    grid = g.grid
    upper = grid.nodes[-4]
    lower = max(upper / 100.0, grid.nodes[3])
    return np.geomspace(lower, upper, count)


def mass_profile(g: RadialMetric, radii: Sequence[float]) -> np.ndarray:
    """m(R) on each sphere of the ladder."""
    m = g.dimension
    x = g.grid.x
    d1, _ = g.profile_operators()
    d_log_B = d1(g.log_B)

    radii = np.asarray(radii, dtype=float)
    xr = np.log(radii)
    A2 = np.exp(2.0 * CubicSpline(x, g.log_A)(xr))
    B2 = np.exp(2.0 * CubicSpline(x, g.log_B)(xr))
    dB2 = 2.0 * B2 * CubicSpline(x, d_log_B)(xr) / radii
    return (m - 1) * radii ** (m - 1) * ((A2 - B2) / radii - dB2)


def _check_radii(g: RadialMetric, radii: np.ndarray):
    if radii.size < 3:
        raise ValueError(f"Mass ladder needs at least 3 radii, got {radii.size}")
    if np.any(radii < g.grid.rho_min) or np.any(radii > g.grid.rho_max):
        raise ValueError(f"Mass radii must lie in [{g.grid.rho_min}, {g.grid.rho_max}]")
    if radii.max() / radii.min() < 10.0 * (1.0 - 1e-12):
        raise ValueError("Mass radii must span at least one decade")


def adm_mass(g: RadialMetric, radii: Optional[Sequence[float]] = None,
             tau: Optional[float] = None, atol: float = MASS_ZERO_TOLERANCE) -> MassEstimate:
    """
    Richardson-extrapolated ADM mass over a ladder of spheres.

    With decay order τ, m(R) = m + C R^(-τ) + ..., and each consecutive pair
    of radii gives one extrapolant. Without τ, (m, C, τ) are fitted jointly.
    A ladder whose estimate plus spread stays within atol reports mass 0.

    Raises:
        InsufficientDecay: If the extrapolants spread by more than 10% of a nonzero mass
        ValueError: If the radii do not form a valid ladder
    """
    if not isinstance(g, RadialMetric):
        raise UnsupportedGeometry("ADM mass is defined for asymptotically flat metrics")
    radii = np.sort(np.asarray(default_mass_radii(g) if radii is None else radii, dtype=float))
    _check_radii(g, radii)
    values = mass_profile(g, radii)
    tau = tau if tau is not None else g.tau

    if tau is None:
        def model(R, mass, c, q):
            return mass + c * R ** (-q)

        try:
            params, cov = curve_fit(model, radii, values, p0=(values[-1], 0.0, 1.0), maxfev=10000)
        except (RuntimeError, ValueError) as e:
            raise InsufficientDecay(f"Mass fit did not converge: {e}")
        error = float(np.sqrt(abs(cov[0, 0]))) if np.all(np.isfinite(cov)) else float('inf')
        estimate = MassEstimate(float(params[0]), error, tuple(radii), tuple(values),
                                (), float(params[2]), True)
    else:
        u = radii ** (-tau)
        extrapolants = (values[1:] * u[:-1] - values[:-1] * u[1:]) / (u[:-1] - u[1:])
        error = float(np.max(extrapolants) - np.min(extrapolants))
        estimate = MassEstimate(float(extrapolants[-1]), error, tuple(radii), tuple(values),
                                tuple(extrapolants), float(tau), False)

    if abs(estimate.mass) + estimate.error <= atol:
        logger.debug(f"Mass ladder at zero: {estimate.mass:.3e} ± {estimate.error:.3e}")
        return replace(estimate, mass=0.0)
    if not estimate.error <= MASS_SPREAD_TOLERANCE * abs(estimate.mass) + 1e-12:
        raise InsufficientDecay(
            f"Mass ladder does not stabilize: {estimate.mass:.6g} ± {estimate.error:.3g}"
        )
    return estimate


# -- decay -------------------------------------------------------------------


@dataclass(frozen=True)
class AsymptoticFlatnessReport:
    """Fitted log-log slopes of g - g_e and its first two ρ-derivatives."""
    tau: float
    slopes: Tuple[float, float, float]
    thresholds: Tuple[float, float, float]
    passed: Tuple[bool, bool, bool]

    @property
    def ok(self) -> bool:
        return all(self.passed)

    def to_dict(self) -> dict:
        return {'tau': self.tau, 'slopes': list(self.slopes),
                'thresholds': list(self.thresholds), 'passed': list(self.passed), 'ok': self.ok}


def _decay_slope(rho: np.ndarray, values: np.ndarray) -> float:
    magnitude = np.abs(values)
    if np.all(magnitude < 1e-14):
        return float('-inf')
    keep = magnitude >= 1e-14
    slope, _ = np.polyfit(np.log(rho[keep]), np.log(magnitude[keep]), 1)
    return float(slope)


def asymptotic_flatness_check(g: RadialMetric, tau: Optional[float] = None) -> AsymptoticFlatnessReport:
    """
    Slopes of |g - g_e|, |∂(g - g_e)|, |∂²(g - g_e)| on the outer decade must be
    at most -τ, -τ-1, -τ-2 (each with +0.2 tolerance).
    """
    if not isinstance(g, RadialMetric):
        raise UnsupportedGeometry("Decay check applies to radial metrics")
    tau = tau if tau is not None else (g.tau if g.tau is not None else g.dimension - 2)
    rho = g.grid.nodes
    d1, d2 = g.plain_operators()
    tail = g.grid.outer_decade()

    deviations = [g.A ** 2 - 1.0, g.B ** 2 - 1.0]
    orders = []
    for f in deviations:
        df = d1(f) / rho
        ddf = (d2(f) - d1(f)) / rho ** 2
        orders.append((f, df, ddf))

    slopes = []
    for k in range(3):
        envelope = np.maximum(np.abs(orders[0][k]), np.abs(orders[1][k]))
        slopes.append(_decay_slope(rho[tail], envelope[tail]))
    thresholds = (-tau + SLOPE_TOLERANCE, -tau - 1 + SLOPE_TOLERANCE, -tau - 2 + SLOPE_TOLERANCE)
    passed = tuple(bool(s <= t) for s, t in zip(slopes, thresholds))
    return AsymptoticFlatnessReport(float(tau), tuple(slopes), thresholds, passed)
