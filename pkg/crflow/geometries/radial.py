"""
Radial Geometry Class
Rotationally symmetric asymptotically flat metrics A(ρ)²dρ² + B(ρ)²ρ²dΩ²

© 2025-2030 All rights reserved Ashutosh Sinha
email: ajsinha@gmail.com

Profiles live on a log-spaced grid and all derivatives are taken in
x = ln ρ. With a = ρA, b = ρB, α = ln a, β = ln b and n = m - 1, the
orthonormal Ricci components are

    Ric_r = -n K / a²
    Ric_t = -K / a² + (n - 1)(1/b² - β'²/a²),    K = β'' + β'² - α'β'

The evolved variables are σ_A = ln A and σ_B = ln B, so a flat metric is
the zero state.
"""

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Optional, Tuple
import logging

import numpy as np

from ..flowcore.exceptions import (
    InvalidGrid,
    InvalidMetric,
    IncompatibleReference,
    ensure_finite,
)
from ..flowcore.tensors import (
    SymmetricTwoTensor,
    CurvatureData,
    GaugeTerm,
    TensorRole,
)
from .stencils import (
    GhostRule,
    ONE_SIDED,
    StencilOperator,
    decay,
    derivative_pair,
    mirror,
)
from .tensor_ops import einstein_deviation, operator_G

logger = logging.getLogger(__name__)

MIN_NODES = 16


class InnerClosure(str, Enum):
    """Treatment of the inner sphere ρ = rho_min."""
    THROAT = "throat"        # minimal sphere of an inversion-symmetric slice: ln a, ln b even
    REFLECT = "reflect"      # flat core: ln A, ln B even
    ONE_SIDED = "one_sided"  # no symmetry assumed


class OuterClosure(str, Enum):
    """Treatment of the outer sphere ρ = rho_max."""
    TAIL = "tail"            # ghosts follow the ρ^(2-m) harmonic tail
    ONE_SIDED = "one_sided"


@dataclass(frozen=True, eq=False)
class RadialGrid:
    """Log-spaced radial nodes with constant ratio between neighbours."""
    rho_min: float
    rho_max: float
    n_nodes: int
    dimension: int
    nodes: np.ndarray = field(repr=False)

    @property
    def log_step(self) -> float:
        return float(np.log(self.rho_max / self.rho_min) / (self.n_nodes - 1))

    @cached_property
    def x(self) -> np.ndarray:
        return np.log(self.nodes)

    def same_as(self, other: 'RadialGrid') -> bool:
        return (
            self.n_nodes == other.n_nodes
            and self.dimension == other.dimension
            and np.allclose(self.nodes, other.nodes, rtol=1e-14, atol=0.0)
        )

    def outer_decade(self) -> np.ndarray:
        """Boolean mask of nodes in [rho_max/10, rho_max]."""
        return self.nodes >= self.rho_max / 10.0


def build_radial_grid(rho_min: float, rho_max: float, n_nodes: int, m: int = 3,
                      min_nodes: int = MIN_NODES) -> RadialGrid:
    """
    Build a log-spaced grid with step h = ln(rho_max/rho_min)/(n_nodes-1).

    Raises:
        InvalidGrid: If 0 < rho_min < rho_max, n_nodes >= min_nodes or m >= 3 fails
    """
    if not (np.isfinite(rho_min) and np.isfinite(rho_max)) or not (0 < rho_min < rho_max):
        raise InvalidGrid(f"Need 0 < rho_min < rho_max, got {rho_min}, {rho_max}")
    if int(n_nodes) != n_nodes or n_nodes < max(2, min_nodes):
        raise InvalidGrid(f"n_nodes must be an integer >= {max(2, min_nodes)}, got {n_nodes}")
    if int(m) != m or m < 3:
        raise InvalidGrid(f"Dimension m must be an integer >= 3, got {m}")

    x = np.linspace(np.log(rho_min), np.log(rho_max), int(n_nodes))
    nodes = np.exp(x)
    nodes[0] = rho_min
    nodes[-1] = rho_max
    logger.debug(f"Radial grid: [{rho_min}, {rho_max}] with {n_nodes} nodes, m={m}")
    return RadialGrid(float(rho_min), float(rho_max), int(n_nodes), int(m), nodes)


@dataclass(frozen=True)
class RadialJet:
    """Log-derivatives of a radial metric at the grid nodes."""
    a2: np.ndarray
    b2: np.ndarray
    d_alpha: np.ndarray
    dd_alpha: np.ndarray
    d_beta: np.ndarray
    dd_beta: np.ndarray

    @property
    def warp(self) -> np.ndarray:
        """K = β'' + β'² - α'β'."""
        return self.dd_beta + self.d_beta ** 2 - self.d_alpha * self.d_beta


@dataclass(frozen=True, eq=False)
class RadialMetric:
    """
    Rotationally symmetric metric A²dρ² + B²ρ²dΩ² on a RadialGrid.

    Attributes:
        grid: Radial grid
        A: Radial profile (positive)
        B: Sphere-factor profile (positive)
        tau: Decay order of A-1, B-1 (None when unknown)
        closure: Inner closure of the finite-difference stencils
        outer: Outer closure of the finite-difference stencils
        decay_constant: max(|A-1|, |B-1|)·ρ^tau on the outer decade
    """
    grid: RadialGrid
    A: np.ndarray = field(repr=False)
    B: np.ndarray = field(repr=False)
    tau: Optional[float] = None
    closure: InnerClosure = InnerClosure.ONE_SIDED
    outer: OuterClosure = OuterClosure.TAIL
    decay_constant: float = field(init=False)

    def __post_init__(self):
        A = np.asarray(self.A, dtype=float)
        B = np.asarray(self.B, dtype=float)
        n = self.grid.n_nodes
        if n < MIN_NODES:
            raise InvalidGrid(f"Metrics need at least {MIN_NODES} nodes, grid has {n}")
        if A.shape != (n,) or B.shape != (n,):
            raise InvalidMetric(f"Profiles must have shape ({n},), got {A.shape} and {B.shape}")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(B))):
            raise InvalidMetric("Profiles contain non-finite values")
        if np.any(A <= 0) or np.any(B <= 0):
            raise InvalidMetric("Profiles A and B must be positive")
        if self.tau is not None and self.tau <= 0:
            raise InvalidMetric(f"Decay order must be positive, got {self.tau}")
        object.__setattr__(self, 'A', A)
        object.__setattr__(self, 'B', B)
        object.__setattr__(self, 'closure', InnerClosure(self.closure))
        object.__setattr__(self, 'outer', OuterClosure(self.outer))

        tail = self.grid.outer_decade()
        order = self.tau if self.tau is not None else self.dimension - 2
        deviation = np.maximum(np.abs(A[tail] - 1.0), np.abs(B[tail] - 1.0))
        object.__setattr__(
            self, 'decay_constant',
            float(np.max(deviation * self.grid.nodes[tail] ** order))
        )

    @property
    def dimension(self) -> int:
        return self.grid.dimension

    @property
    def nodes(self) -> np.ndarray:
        return self.grid.nodes

    @cached_property
    def log_A(self) -> np.ndarray:
        return np.log(self.A)

    @cached_property
    def log_B(self) -> np.ndarray:
        return np.log(self.B)

    # -- closures -------------------------------------------------------

    def _outer_rule(self) -> GhostRule:
        if self.outer is OuterClosure.TAIL:
            return decay(float(self.dimension - 2))
        return ONE_SIDED

    def profile_operators(self) -> Tuple[StencilOperator, StencilOperator]:
        """Operators for σ_A, σ_B. At a throat, a = ρA is even so σ picks up a shift."""
        inner = {
            InnerClosure.THROAT: mirror(1.0, 2.0),
            InnerClosure.REFLECT: mirror(1.0, 0.0),
            InnerClosure.ONE_SIDED: ONE_SIDED,
        }[self.closure]
        return derivative_pair(self.grid.n_nodes, self.grid.log_step, inner, self._outer_rule())

    def scalar_operators(self) -> Tuple[StencilOperator, StencilOperator]:
        """Operators for even scalar fields (pressure, curvature)."""
        inner = ONE_SIDED if self.closure is InnerClosure.ONE_SIDED else mirror(1.0)
        return derivative_pair(self.grid.n_nodes, self.grid.log_step, inner, self._outer_rule())

    def vector_operators(self, odd: bool = True) -> Tuple[StencilOperator, StencilOperator]:
        """Operators for the radial component of a vector field (odd at a throat when odd is set)."""
        inner = mirror(-1.0) if odd and self.closure is InnerClosure.THROAT else ONE_SIDED
        return derivative_pair(self.grid.n_nodes, self.grid.log_step, inner, self._outer_rule())

    def plain_operators(self) -> Tuple[StencilOperator, StencilOperator]:
        """One-sided operators with no closure assumption."""
        return derivative_pair(self.grid.n_nodes, self.grid.log_step)

    @cached_property
    def jet(self) -> RadialJet:
        d1, d2 = self.profile_operators()
        x = self.grid.x
        return RadialJet(
            a2=np.exp(2.0 * (x + self.log_A)),
            b2=np.exp(2.0 * (x + self.log_B)),
            d_alpha=1.0 + d1(self.log_A),
            dd_alpha=d2(self.log_A),
            d_beta=1.0 + d1(self.log_B),
            dd_beta=d2(self.log_B),
        )

    # -- construction ---------------------------------------------------

    def with_log_profiles(self, log_A: np.ndarray, log_B: np.ndarray) -> 'RadialMetric':
        return RadialMetric(self.grid, np.exp(log_A), np.exp(log_B),
                            self.tau, self.closure, self.outer)

    def scaled(self, factor: float) -> 'RadialMetric':
        """The metric factor·g on the same grid."""
        # factor·g is not asymptotically flat, so the tail closure no longer applies
        root = np.sqrt(factor)
        return RadialMetric(self.grid, root * self.A, root * self.B,
                            self.tau, self.closure, OuterClosure.ONE_SIDED)

    @classmethod
    def euclidean(cls, grid: RadialGrid, closure: InnerClosure = InnerClosure.REFLECT,
                  outer: OuterClosure = OuterClosure.TAIL) -> 'RadialMetric':
        ones = np.ones(grid.n_nodes)
        return cls(grid, ones, ones.copy(), None, closure, outer)

    def proper_spacing(self) -> np.ndarray:
        """Proper radial length of each log step, a·h."""
        return self.grid.nodes * self.A * self.grid.log_step

    def __repr__(self) -> str:
        return (f"<RadialMetric(n={self.grid.n_nodes}, m={self.dimension}, "
                f"closure={self.closure.value}, tau={self.tau})>")


# -- curvature -------------------------------------------------------------


def _ricci_components(g: RadialMetric) -> Tuple[np.ndarray, np.ndarray]:
    jet = g.jet
    n = g.dimension - 1
    K = jet.warp
    ric_r = -n * K / jet.a2
    ric_t = -K / jet.a2 + (n - 1) * (1.0 / jet.b2 - jet.d_beta ** 2 / jet.a2)
    return ric_r, ric_t


def scalar_curvature_linearization(g: RadialMetric, T: SymmetricTwoTensor) -> np.ndarray:
    """
    Derivative of the discrete scalar curvature along ∂_t g = T.

    T is given by orthonormal components, so σ_A moves by T_r/2 and σ_B by T_t/2.
    The linear parts of the profile operators are used, which makes this the
    exact Jacobian of the discrete s.
    """
    jet = g.jet
    n = g.dimension - 1
    d1, d2 = g.profile_operators()
    u_r = 0.5 * T.components[0]
    u_t = 0.5 * T.components[1]
    du_r = d1.linear(u_r)
    du_t = d1.linear(u_t)
    ddu_t = d2.linear(u_t)

    K = jet.warp
    dK = ddu_t + 2.0 * jet.d_beta * du_t - jet.d_beta * du_r - jet.d_alpha * du_t
    return (
        -2.0 * n * dK / jet.a2
        + 4.0 * n * K * u_r / jet.a2
        + n * (n - 1) * (
            -2.0 * u_t / jet.b2
            - 2.0 * jet.d_beta * du_t / jet.a2
            + 2.0 * jet.d_beta ** 2 * u_r / jet.a2
        )
    )


def ricci_radial(g: RadialMetric, s0: float = 0.0) -> CurvatureData:
    """
    Ricci tensor, scalar curvature and Einstein deviation of a radial metric.

    Raises:
        NumericalBreakdown: If any curvature value is non-finite
    """
    n = g.dimension - 1
    ric_r, ric_t = _ricci_components(g)
    ric = SymmetricTwoTensor(np.vstack([ric_r, ric_t]), (1.0, float(n)), TensorRole.CURVATURE)
    scalar = ensure_finite(ric.trace(), "scalar curvature")
    deviation, deviation_norm_sq = einstein_deviation(ric, g.dimension, s0)
    source = scalar_curvature_linearization(g, deviation)
    return CurvatureData(
        ric=ric,
        scalar=scalar,
        s0=float(s0),
        deviation=deviation,
        deviation_norm_sq=deviation_norm_sq,
        ric_norm_sq=ric.norm_sq(),
        constraint_source=ensure_finite(source, "pressure source"),
    )


def radial_laplacian(g: RadialMetric, u: np.ndarray,
                     operators: Optional[Tuple[StencilOperator, StencilOperator]] = None) -> np.ndarray:
    """Δu = (u'' + (nβ' - α')u')/a² for a radial function u."""
    jet = g.jet
    n = g.dimension - 1
    d1, d2 = operators or g.scalar_operators()
    return (d2(u) + (n * jet.d_beta - jet.d_alpha) * d1(u)) / jet.a2


# -- gauge ingredients -----------------------------------------------------


def divergence_radial(B: SymmetricTwoTensor, g: RadialMetric) -> np.ndarray:
    """(δB)_x = ∇^j B_jx in the log coordinate x."""
    n = g.dimension - 1
    d1, _ = g.plain_operators()
    B_r, B_t = B.components
    return d1(B_r) + n * g.jet.d_beta * (B_r - B_t)


def adjoint_divergence_radial(omega_x: np.ndarray, g: RadialMetric) -> SymmetricTwoTensor:
    """(δ*ω)_ij = -½(∇_i ω_j + ∇_j ω_i) for a radial one-form ω = ω_x dx."""
    jet = g.jet
    n = g.dimension - 1
    d1, _ = g.plain_operators()
    Y = omega_x / jet.a2
    comps = np.vstack([-(d1(Y) + jet.d_alpha * Y), -jet.d_beta * Y])
    return SymmetricTwoTensor(comps, (1.0, float(n)), TensorRole.GAUGE_TERM)


def lie_derivative_radial(W: np.ndarray, g: RadialMetric, odd: bool = True) -> SymmetricTwoTensor:
    """𝓛_W g for W = W^x ∂_x, in orthonormal components."""
    jet = g.jet
    n = g.dimension - 1
    d1, _ = g.vector_operators(odd)
    comps = np.vstack([2.0 * (d1(W) + jet.d_alpha * W), 2.0 * jet.d_beta * W])
    return SymmetricTwoTensor(comps, (1.0, float(n)), TensorRole.GAUGE_TERM)


def _check_reference(g: RadialMetric, g_ref: RadialMetric):
    if not isinstance(g_ref, RadialMetric):
        raise IncompatibleReference(f"Reference {type(g_ref).__name__} is not a radial metric")
    if not g.grid.same_as(g_ref.grid):
        raise IncompatibleReference("Reference metric lives on a different radial grid")


def deturck_vector_radial(g: RadialMetric, g_ref: RadialMetric) -> np.ndarray:
    """W^x = g^{ij}(Γ^x_ij[g] - Γ^x_ij[g_ref])."""
    _check_reference(g, g_ref)
    n = g.dimension - 1
    jet, ref = g.jet, g_ref.jet
    W = (jet.d_alpha - n * jet.d_beta - ref.d_alpha) / jet.a2 \
        + n * ref.d_beta * ref.b2 / (jet.b2 * ref.a2)
    return ensure_finite(W, "DeTurck vector field")


def deturck_gauge_term_radial(g: RadialMetric, g_ref: RadialMetric) -> GaugeTerm:
    W = deturck_vector_radial(g, g_ref)
    # W is odd about a throat only when the reference shares the inversion symmetry
    odd = g_ref.closure is InnerClosure.THROAT
    return GaugeTerm(field=W, lie_derivative=lie_derivative_radial(W, g, odd))


def deturck_identity_form(g: RadialMetric, g_ref: RadialMetric) -> SymmetricTwoTensor:
    """2δ*(g_ref⁻¹ δG(g_ref)), which equals 𝓛_W g in the continuum."""
    _check_reference(g, g_ref)
    jet, ref = g.jet, g_ref.jet
    n = g.dimension - 1
    reference = SymmetricTwoTensor(np.vstack([ref.a2 / jet.a2, ref.b2 / jet.b2]), (1.0, float(n)))
    omega = divergence_radial(operator_G(reference, g.dimension), g)
    lowered = jet.a2 * (omega / ref.a2)
    return adjoint_divergence_radial(lowered, g) * 2.0
