"""
Conformal Flow Value Types
Symmetric two-tensors, curvature bundles and pressure results

© 2025-2030 All rights reserved Ashutosh Sinha
email: ajsinha@gmail.com

All tensors are stored by their orthonormal-frame components, so the metric
itself is the all-ones tensor and traces/norms are weighted sums:

    radial class       components shape (2, N)  weights (1, m-1)
    homogeneous class  components shape (3,)    weights (1, 1, 1)
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence, Tuple, Union

import numpy as np


class TensorRole(str, Enum):
    METRIC_PERTURBATION = "metric-perturbation"
    CURVATURE = "curvature"
    GAUGE_TERM = "gauge-term"


@dataclass(frozen=True)
class SymmetricTwoTensor:
    """
    Diagonal symmetric two-tensor of a reduction class.

    Attributes:
        components: Orthonormal-frame components, one row per block
        weights: Multiplicity of each block (1 for radial, m-1 for tangential)
        role: What the tensor represents
    """
    components: np.ndarray
    weights: Tuple[float, ...]
    role: TensorRole = TensorRole.METRIC_PERTURBATION

    def __post_init__(self):
        components = np.asarray(self.components, dtype=float)
        if components.shape[0] != len(self.weights):
            raise ValueError(
                f"Tensor has {components.shape[0]} blocks but {len(self.weights)} weights"
            )
        object.__setattr__(self, 'components', components)
        object.__setattr__(self, 'weights', tuple(float(w) for w in self.weights))

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.components.shape

    def _weight_column(self) -> np.ndarray:
        w = np.asarray(self.weights)
        return w.reshape((-1,) + (1,) * (self.components.ndim - 1))

    def trace(self) -> Union[np.ndarray, float]:
        """trace_g of the tensor (pointwise)."""
        return np.sum(self._weight_column() * self.components, axis=0)

    def norm_sq(self) -> Union[np.ndarray, float]:
        """|T|² = g^{ik} g^{jl} T_ij T_kl (pointwise)."""
        return np.sum(self._weight_column() * self.components ** 2, axis=0)

    def inner(self, other: 'SymmetricTwoTensor') -> Union[np.ndarray, float]:
        self._check_compatible(other)
        return np.sum(self._weight_column() * self.components * other.components, axis=0)

    def with_role(self, role: TensorRole) -> 'SymmetricTwoTensor':
        return SymmetricTwoTensor(self.components, self.weights, role)

    def _check_compatible(self, other: 'SymmetricTwoTensor'):
        if self.components.shape != other.components.shape or self.weights != other.weights:
            raise ValueError(
                f"Incompatible tensors: shapes {self.components.shape} vs {other.components.shape}"
            )

    def __add__(self, other: 'SymmetricTwoTensor') -> 'SymmetricTwoTensor':
        self._check_compatible(other)
        return SymmetricTwoTensor(self.components + other.components, self.weights, self.role)

    def __sub__(self, other: 'SymmetricTwoTensor') -> 'SymmetricTwoTensor':
        self._check_compatible(other)
        return SymmetricTwoTensor(self.components - other.components, self.weights, self.role)

    def __neg__(self) -> 'SymmetricTwoTensor':
        return SymmetricTwoTensor(-self.components, self.weights, self.role)

    def __mul__(self, factor) -> 'SymmetricTwoTensor':
        """Scale by a constant or by a scalar field on the same grid."""
        return SymmetricTwoTensor(self.components * np.asarray(factor), self.weights, self.role)

    __rmul__ = __mul__

    @classmethod
    def identity_like(cls, other: 'SymmetricTwoTensor',
                      role: TensorRole = TensorRole.METRIC_PERTURBATION) -> 'SymmetricTwoTensor':
        """The metric itself in orthonormal components."""
        return cls(np.ones_like(other.components), other.weights, role)

    @classmethod
    def zeros_like(cls, other: 'SymmetricTwoTensor',
                   role: TensorRole = TensorRole.METRIC_PERTURBATION) -> 'SymmetricTwoTensor':
        return cls(np.zeros_like(other.components), other.weights, role)


@dataclass(frozen=True)
class CurvatureData:
    """
    Curvature of a metric relative to a target scalar curvature s0.

    constraint_source is the source of the linearized pressure variant: −|E|² in
    the homogeneous class, and the linearization of the discrete scalar
    curvature along E in the radial class (equal to −|E|² on the constraint
    surface). The default pressure solve uses −deviation_norm_sq.
    """
    ric: SymmetricTwoTensor
    scalar: Union[np.ndarray, float]
    s0: float
    deviation: SymmetricTwoTensor
    deviation_norm_sq: Union[np.ndarray, float]
    ric_norm_sq: Union[np.ndarray, float]
    constraint_source: Union[np.ndarray, float, None] = None

    @property
    def dimension(self) -> int:
        return int(round(sum(self.ric.weights)))


class PressureStatus(str, Enum):
    OK = "ok"
    NEAR_RESONANT = "near_resonant"
    FAILED = "failed"


@dataclass(frozen=True)
class PressureField:
    """Conformal pressure with the residual of the discrete elliptic equation."""
    values: Union[np.ndarray, float]
    residual_norm: float
    status: PressureStatus = PressureStatus.OK
    min_pivot: Optional[float] = None


@dataclass(frozen=True)
class InvertibilityReport:
    """Smallest singular value estimate of (m-1)Δ + s0 in discrete form."""
    sigma_min: float
    scale: float
    status: PressureStatus
    method: str
    iterations: int = 0
    spectrum_sample: Sequence[float] = field(default_factory=tuple)

    @property
    def relative(self) -> float:
        return self.sigma_min / self.scale if self.scale > 0 else 0.0

    def to_dict(self) -> dict:
        return {
            'sigma_min': self.sigma_min,
            'scale': self.scale,
            'relative': self.relative,
            'status': self.status.value,
            'method': self.method,
            'iterations': self.iterations,
        }


@dataclass(frozen=True)
class GaugeTerm:
    """DeTurck vector field W (x-component on radial grids) and 𝓛_W g."""
    field: Union[np.ndarray, float]
    lie_derivative: SymmetricTwoTensor
