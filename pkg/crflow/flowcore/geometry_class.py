"""
Geometry Class Abstract Base Class
Defines the interface every symmetry-reduced metric class provides to the flow

© 2025-2030 All rights reserved Ashutosh Sinha
email: ajsinha@gmail.com
"""

from abc import ABC, abstractmethod
from typing import Any, Optional
import logging

import numpy as np

from .flow_types import FlowConfig, ReferenceKind
from .tensors import (
    CurvatureData,
    GaugeTerm,
    InvertibilityReport,
    PressureField,
    SymmetricTwoTensor,
)


class GeometryClass(ABC):
    """
    Abstract base class for reduction classes.

    A geometry class knows how to compute curvature, pressure and gauge terms
    for its metrics, and how to map a metric to the flat state vector the
    time integrator advances. Metric objects themselves stay immutable.
    """

    def __init__(self, geometry_kind: str):
        """
        Initialize the geometry class.

        Args:
            geometry_kind: Registry name (e.g. 'radial_af', 'homogeneous')
        """
        self.geometry_kind = geometry_kind
        self.logger = logging.getLogger(f"{__name__}.{geometry_kind}")

    @abstractmethod
    def accepts(self, metric: Any) -> bool:
        """Whether the metric belongs to this class."""
        pass

    @abstractmethod
    def curvature(self, metric: Any, s0: float) -> CurvatureData:
        pass

    @abstractmethod
    def pressure(self, metric: Any, curvature: CurvatureData, config: FlowConfig) -> PressureField:
        """
        Solve (m-1)Δp + s0 p = -|E|² for the current metric.

        Raises:
            NonInvertibleOperator: If the discrete operator cannot be inverted
        """
        pass

    @abstractmethod
    def gauge_term(self, metric: Any, reference: Any) -> GaugeTerm:
        pass

    @abstractmethod
    def reference_metric(self, initial: Any, kind: ReferenceKind) -> Any:
        pass

    @abstractmethod
    def invertibility(self, metric: Any, s0: float) -> InvertibilityReport:
        pass

    @abstractmethod
    def pack(self, metric: Any) -> np.ndarray:
        """Flat state vector of the metric's evolved variables."""
        pass

    @abstractmethod
    def unpack(self, state: np.ndarray, template: Any) -> Any:
        """Metric with the evolved variables in state and everything else from template."""
        pass

    @abstractmethod
    def state_rate(self, metric: Any, rhs: SymmetricTwoTensor) -> np.ndarray:
        """Time derivative of the state vector for ∂g/∂t = rhs."""
        pass

    @abstractmethod
    def time_step(self, metric: Any, dt_safety: float) -> float:
        pass

    @abstractmethod
    def volume_density(self, metric: Any) -> np.ndarray:
        """log of the volume density that ∂ₜ dvol = -mp dvol acts on."""
        pass

    def constraint_residual(self, curvature: CurvatureData) -> float:
        """max |s - s0|."""
        return float(np.max(np.abs(np.asarray(curvature.scalar) - curvature.s0)))

    def constraint_satisfied(self, curvature: CurvatureData, tolerance: float) -> bool:
        return self.constraint_residual(curvature) <= tolerance

    def get_geometry_kind(self) -> str:
        return self.geometry_kind

    def __repr__(self) -> str:
        return f"<{self.__class__.__name__}(kind={self.geometry_kind})>"
