"""
Class-Independent Tensor Operations
Einstein deviation and the DeTurck operator G on orthonormal components

© 2025-2030 All rights reserved Ashutosh Sinha
email: ajsinha@gmail.com
"""

from typing import Tuple, Union

import numpy as np

from ..flowcore.tensors import CurvatureData, SymmetricTwoTensor, TensorRole


def _dimension_of(g) -> int:
    return int(getattr(g, 'dimension', g))


def einstein_deviation(curv: Union[CurvatureData, SymmetricTwoTensor], g,
                       s0: float) -> Tuple[SymmetricTwoTensor, Union[np.ndarray, float]]:
    """
    E = Ric - (s0/m) g and |E|².

    Args:
        curv: Curvature data or the Ricci tensor itself
        g: Metric (or its dimension m)
        s0: Target scalar curvature

    Returns:
        Tuple of (E, |E|²)
    """
    ric = curv.ric if isinstance(curv, CurvatureData) else curv
    m = _dimension_of(g)
    unit = SymmetricTwoTensor.identity_like(ric)
    deviation = (ric - unit * (s0 / m)).with_role(TensorRole.CURVATURE)
    return deviation, deviation.norm_sq()


def operator_G(B: SymmetricTwoTensor, g) -> SymmetricTwoTensor:
    """G(B) = B - ½ trace_g(B) g."""
    unit = SymmetricTwoTensor.identity_like(B)
    return B - unit * (0.5 * B.trace())
