"""
Class-Dispatching Operators
Entry points that accept a metric of either reduction class

© 2025-2030 All rights reserved Ashutosh Sinha
email: ajsinha@gmail.com
"""

from typing import Optional, Tuple, Union

import numpy as np

from ..flowcore.exceptions import IncompatibleReference, UnsupportedGeometry
from ..flowcore.tensors import GaugeTerm, InvertibilityReport, SymmetricTwoTensor
from .homogeneous import (
    HomogeneousMetric,
    adjoint_divergence_homogeneous,
    divergence_homogeneous,
    invertibility_estimate_homogeneous,
)
from .homogeneous_geometry import HomogeneousGeometry
from .radial import (
    InnerClosure,
    RadialMetric,
    adjoint_divergence_radial,
    deturck_gauge_term_radial,
    divergence_radial,
)
from .radial_pressure import invertibility_estimate_radial
from .tensor_ops import operator_G

Metric = Union[RadialMetric, HomogeneousMetric]


def operator_G_and_divergence(
    B: SymmetricTwoTensor, g: Metric, omega: Optional[np.ndarray] = None
) -> Tuple[SymmetricTwoTensor, np.ndarray, SymmetricTwoTensor]:
    """
    G(B), δB and δ*ω for a tensor and one-form compatible with g.

    Radial one-forms are given by their dx component; homogeneous one-forms
    by frame components. ω defaults to zero.
    """
    G = operator_G(B, g)
    if isinstance(g, RadialMetric):
        omega = np.zeros(g.grid.n_nodes) if omega is None else np.asarray(omega, dtype=float)
        return G, divergence_radial(B, g), adjoint_divergence_radial(omega, g)
    if isinstance(g, HomogeneousMetric):
        omega = np.zeros(3) if omega is None else np.asarray(omega, dtype=float)
        return G, divergence_homogeneous(B, g), adjoint_divergence_homogeneous(omega, g)
    raise UnsupportedGeometry(f"No operators for {type(g).__name__}")


def deturck_gauge_term(g: Metric, g_ref: Optional[Metric] = None) -> GaugeTerm:
    """
    DeTurck vector field and 𝓛_W g. Radial references default to Euclidean.

    Raises:
        IncompatibleReference: If g_ref belongs to another class or grid
    """
    if isinstance(g, RadialMetric):
        if g_ref is None:
            g_ref = RadialMetric.euclidean(g.grid, InnerClosure.REFLECT, g.outer)
        return deturck_gauge_term_radial(g, g_ref)
    if isinstance(g, HomogeneousMetric):
        if g_ref is not None and not isinstance(g_ref, HomogeneousMetric):
            raise IncompatibleReference(f"Reference {type(g_ref).__name__} is not homogeneous")
        return HomogeneousGeometry().gauge_term(g, g_ref)
    raise UnsupportedGeometry(f"No gauge term for {type(g).__name__}")


def invertibility_estimate(g: Metric, s0: float) -> InvertibilityReport:
    if isinstance(g, RadialMetric):
        return invertibility_estimate_radial(g, s0)
    if isinstance(g, HomogeneousMetric):
        return invertibility_estimate_homogeneous(g, s0)
    raise UnsupportedGeometry(f"No invertibility estimate for {type(g).__name__}")
