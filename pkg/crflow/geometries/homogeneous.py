"""
Homogeneous Geometry Class
Left-invariant diagonal metrics on compact 3-dimensional groups

© 2025-2030 All rights reserved Ashutosh Sinha
email: ajsinha@gmail.com

A metric is g = Σ g_i θ_i² for a fixed left-invariant coframe with
[e_i, e_j] = c^k_ij e_k. Curvature follows from the orthonormal structure
constants C_ijk = <[f_i, f_j], f_k> through the Koszul formula

    Γ_ijk = <∇_{f_i} f_j, f_k> = ½(C_ijk - C_jki + C_kij)

so no coordinates are involved.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Tuple
import logging

import numpy as np

from ..flowcore.exceptions import (
    InvalidMetric,
    NonInvertibleOperator,
    UnsupportedGeometry,
    ensure_finite,
)
from ..flowcore.tensors import (
    CurvatureData,
    InvertibilityReport,
    PressureField,
    PressureStatus,
    SymmetricTwoTensor,
    TensorRole,
)
from .tensor_ops import einstein_deviation

logger = logging.getLogger(__name__)

RESONANCE_TOLERANCE = 1e-6
FRAME_WEIGHTS = (1.0, 1.0, 1.0)


def levi_civita() -> np.ndarray:
    eps = np.zeros((3, 3, 3))
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        eps[i, j, k] = 1.0
        eps[j, i, k] = -1.0
    return eps


def milnor_structure_constants(lambdas=(2.0, 2.0, 2.0)) -> np.ndarray:
    """c[k, i, j] = λ_k ε_ijk; the default (2, 2, 2) is the round 3-sphere group."""
    eps = levi_civita()
    return np.asarray(lambdas, dtype=float)[:, None, None] * np.einsum('ijk->kij', eps)


@dataclass(frozen=True, eq=False)
class HomogeneousMetric:
    """
    Diagonal left-invariant metric.

    Attributes:
        coeffs: (g1, g2, g3), all positive
        structure_constants: c[k, i, j], antisymmetric in (i, j)
    """
    coeffs: np.ndarray
    structure_constants: np.ndarray = field(default_factory=milnor_structure_constants, repr=False)

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=float)
        c = np.asarray(self.structure_constants, dtype=float)
        if coeffs.shape != (3,):
            raise InvalidMetric(f"Expected 3 coefficients, got shape {coeffs.shape}")
        if not np.all(np.isfinite(coeffs)) or np.any(coeffs <= 0):
            raise InvalidMetric(f"Coefficients must be positive and finite, got {coeffs}")
        if c.shape != (3, 3, 3):
            raise InvalidMetric(f"Structure constants must have shape (3, 3, 3), got {c.shape}")
        if not np.allclose(c, -np.swapaxes(c, 1, 2), atol=1e-14):
            raise InvalidMetric("Structure constants must be antisymmetric in the lower indices")
        object.__setattr__(self, 'coeffs', coeffs)
        object.__setattr__(self, 'structure_constants', c)

    @property
    def dimension(self) -> int:
        return 3

    @cached_property
    def milnor_constants(self) -> Optional[np.ndarray]:
        """λ with c^k_ij = λ_k ε_ijk, or None if the frame is not of that form."""
        lambdas = np.array([self.structure_constants[k, (k + 1) % 3, (k + 2) % 3] for k in range(3)])
        if np.allclose(self.structure_constants, milnor_structure_constants(lambdas), atol=1e-14):
            return lambdas
        return None

    def with_log_coeffs(self, log_coeffs: np.ndarray) -> 'HomogeneousMetric':
        return HomogeneousMetric(np.exp(log_coeffs), self.structure_constants)

    def scaled(self, factor: float) -> 'HomogeneousMetric':
        return HomogeneousMetric(factor * self.coeffs, self.structure_constants)

    @classmethod
    def round(cls, scale: float = 1.0) -> 'HomogeneousMetric':
        return cls(np.full(3, float(scale)))

    @classmethod
    def squashed(cls, triple=(1.0, 1.0, 2.0)) -> 'HomogeneousMetric':
        return cls(np.asarray(triple, dtype=float))

    def __repr__(self) -> str:
        return f"<HomogeneousMetric(coeffs={self.coeffs.tolist()})>"


@dataclass(frozen=True)
class FrameCurvature:
    """Connection and curvature of a left-invariant metric in its orthonormal frame."""
    structure: np.ndarray   # C[i, j, k]
    connection: np.ndarray  # Γ[i, j, k]
    riemann: np.ndarray     # R[i, j, k, p] = <R(f_i, f_j) f_k, f_p>
    ricci: np.ndarray       # Ric[j, k]


def frame_curvature(g: HomogeneousMetric) -> FrameCurvature:
    root = np.sqrt(g.coeffs)
    C = np.einsum('kij->ijk', g.structure_constants) * root[None, None, :] \
        / (root[:, None, None] * root[None, :, None])
    gamma = 0.5 * (C - np.einsum('jki->ijk', C) + np.einsum('kij->ijk', C))
    riemann = (
        np.einsum('jkl,ilp->ijkp', gamma, gamma)
        - np.einsum('ikl,jlp->ijkp', gamma, gamma)
        - np.einsum('ijl,lkp->ijkp', C, gamma)
    )
    ricci = np.einsum('ijki->jk', riemann)
    return FrameCurvature(C, gamma, riemann, ricci)


def curvature_homogeneous(g: HomogeneousMetric, s0: float = 0.0) -> CurvatureData:
    """Diagonal Ricci tensor, constant scalar curvature and deviation for target s0."""
    frame = frame_curvature(g)
    ricci = ensure_finite(frame.ricci, "homogeneous Ricci tensor")
    diagonal = np.diag(ricci).copy()
    off_diagonal = np.max(np.abs(ricci - np.diag(diagonal)))
    if off_diagonal > 1e-10 * max(1.0, np.max(np.abs(diagonal))):
        logger.warning(f"Ricci tensor is not diagonal in the frame (off-diagonal {off_diagonal:.3e})")

    ric = SymmetricTwoTensor(diagonal, FRAME_WEIGHTS, TensorRole.CURVATURE)
    deviation, deviation_norm_sq = einstein_deviation(ric, g, s0)
    return CurvatureData(
        ric=ric,
        scalar=float(ric.trace()),
        s0=float(s0),
        deviation=deviation,
        deviation_norm_sq=float(deviation_norm_sq),
        ric_norm_sq=float(ric.norm_sq()),
        constraint_source=-float(deviation_norm_sq),
    )


def pressure_homogeneous(deviation_norm_sq: float, s0: float) -> PressureField:
    """
    Constant pressure p = -|E|²/s0.

    Raises:
        NonInvertibleOperator: If s0 = 0 (constants lie in the kernel of Δ)
    """
    if s0 == 0:
        raise NonInvertibleOperator("Homogeneous pressure is undetermined for s0 = 0")
    p = -float(deviation_norm_sq) / float(s0)
    residual = abs(s0 * p + deviation_norm_sq)
    return PressureField(values=p, residual_norm=float(residual), status=PressureStatus.OK)


def volume_homogeneous(g: HomogeneousMetric) -> float:
    """Total volume 16π²·sqrt(g1 g2 g3)/(λ1 λ2 λ3) of the compact group."""
    lambdas = g.milnor_constants
    if lambdas is None or np.any(lambdas <= 0):
        raise UnsupportedGeometry("Volume requires a compact group with positive Milnor constants")
    return float(16.0 * np.pi ** 2 * np.sqrt(np.prod(g.coeffs)) / np.prod(lambdas))


def spin_matrices(two_j: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Angular momentum matrices (Jx, Jy, Jz) of spin j = two_j/2, basis m = j, ..., -j."""
    j = two_j / 2.0
    m = j - np.arange(two_j + 1)
    raising = np.zeros((two_j + 1, two_j + 1), dtype=complex)
    for i in range(two_j):
        raising[i, i + 1] = np.sqrt(j * (j + 1) - m[i + 1] * (m[i + 1] + 1))
    lowering = raising.conj().T
    return (raising + lowering) / 2.0, (raising - lowering) / 2.0j, np.diag(m).astype(complex)


def laplacian_spectrum(g: HomogeneousMetric, max_two_j: int = 12) -> np.ndarray:
    """
    Eigenvalues μ of -Δ on functions, from the spin-j irreducible blocks.

    With e_a = κ_a X_a and [X_1, X_2] = X_3, -Δ acts as Σ (κ_a²/g_a) J_a².
    """
    lambdas = g.milnor_constants
    if lambdas is None or np.any(lambdas <= 0):
        raise UnsupportedGeometry("Spectrum requires a compact group with positive Milnor constants")
    l1, l2, l3 = lambdas
    weights = np.array([l2 * l3, l1 * l3, l1 * l2]) / g.coeffs

    eigenvalues = []
    for two_j in range(max_two_j + 1):
        jx, jy, jz = spin_matrices(two_j)
        operator = weights[0] * jx @ jx + weights[1] * jy @ jy + weights[2] * jz @ jz
        eigenvalues.extend(np.linalg.eigvalsh(operator).tolist())
    return np.sort(np.asarray(eigenvalues))


def invertibility_estimate_homogeneous(g: HomogeneousMetric, s0: float,
                                       max_two_j: int = 12) -> InvertibilityReport:
    """Distance of s0 from (m-1)μ over the computed spectrum, μ = 0 included."""
    spectrum = laplacian_spectrum(g, max_two_j)
    shifted = np.abs(s0 - (g.dimension - 1) * spectrum)
    sigma_min = float(np.min(shifted))
    positive = spectrum[spectrum > 1e-12]
    scale = abs(s0) + (g.dimension - 1) * float(positive[0] if positive.size else 1.0)
    status = PressureStatus.OK
    if sigma_min < RESONANCE_TOLERANCE * scale:
        status = PressureStatus.NEAR_RESONANT
        logger.warning(f"s0={s0} resonates with the Laplacian spectrum (sigma_min={sigma_min:.3e})")
    return InvertibilityReport(sigma_min, scale, status, 'spin-spectrum', 0,
                               tuple(np.unique(np.round(spectrum, 12))[:8].tolist()))


def rough_laplacian(frame: FrameCurvature, T: np.ndarray) -> np.ndarray:
    """Δ of a left-invariant (0,2)-tensor; Σ_a ∇_{f_a} f_a = 0 on unimodular groups."""
    gamma = frame.connection
    grad = -np.einsum('bip,pj->bij', gamma, T) - np.einsum('bjp,ip->bij', gamma, T)
    return -np.einsum('aip,apj->ij', gamma, grad) - np.einsum('ajp,aip->ij', gamma, grad)


def ricci_evolution_rhs(g: HomogeneousMetric) -> np.ndarray:
    """ΔRic + 2 R_ikjl R^kl - 2 Ric² in the orthonormal frame (spatially constant p)."""
    frame = frame_curvature(g)
    ric = frame.ricci
    curvature_term = np.einsum('kijl,kl->ij', frame.riemann, ric)
    return rough_laplacian(frame, ric) + 2.0 * curvature_term - 2.0 * ric @ ric


def divergence_homogeneous(B: SymmetricTwoTensor, g: HomogeneousMetric) -> np.ndarray:
    """(δB)_i = Σ_j (∇_{f_j} B)(f_j, f_i) for a left-invariant diagonal B."""
    gamma = frame_curvature(g).connection
    T = np.diag(B.components)
    grad = -np.einsum('bip,pj->bij', gamma, T) - np.einsum('bjp,ip->bij', gamma, T)
    return np.einsum('jji->i', grad)


def adjoint_divergence_homogeneous(omega: np.ndarray, g: HomogeneousMetric) -> SymmetricTwoTensor:
    """Diagonal part of (δ*ω)_ij = -½(∇_i ω_j + ∇_j ω_i) for a left-invariant ω."""
    gamma = frame_curvature(g).connection
    nabla = -np.einsum('ijk,k->ij', gamma, np.asarray(omega, dtype=float))
    sym = -0.5 * (nabla + nabla.T)
    return SymmetricTwoTensor(np.diag(sym).copy(), FRAME_WEIGHTS, TensorRole.GAUGE_TERM)
