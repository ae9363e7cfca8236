"""
Finite-Difference Stencils
Fourth-order derivative operators on uniform grids with ghost-value closures

© 2025-2030 All rights reserved Ashutosh Sinha
email: ajsinha@gmail.com

Interior nodes use the 5-point centered stencil. Near an end, the stencil
either reaches into ghost values defined by a GhostRule (mirror or power-law
decay) or is replaced by a 6-point one-sided window. Ghost values that are
affine in the field (a mirror with a shift) contribute a constant offset, so
every operator is D f = M f + c.
"""

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
import logging

import numpy as np
from scipy import sparse

logger = logging.getLogger(__name__)

CENTERED_OFFSETS = np.arange(-2, 3)
ONE_SIDED_WINDOW = 6


class GhostKind(str, Enum):
    ONE_SIDED = "one_sided"
    MIRROR = "mirror"
    DECAY = "decay"


@dataclass(frozen=True)
class GhostRule:
    """
    How values beyond an end of the grid are defined.

    mirror: f[end - k] = parity * f[end + k] + shift * k * h  (reflection about the end node)
    decay:  f[end + k] = f[end] * exp(-rate * k * h)           (power-law tail in ρ when h is a log step)
    """
    kind: GhostKind
    parity: float = 1.0
    shift: float = 0.0
    rate: float = 0.0


ONE_SIDED = GhostRule(GhostKind.ONE_SIDED)


def mirror(parity: float = 1.0, shift: float = 0.0) -> GhostRule:
    return GhostRule(GhostKind.MIRROR, parity=parity, shift=shift)


def decay(rate: float) -> GhostRule:
    return GhostRule(GhostKind.DECAY, rate=rate)


def fornberg_weights(z: float, x: np.ndarray, m: int) -> np.ndarray:
    """
    Finite-difference weights for derivatives 0..m at z from nodes x.

    Returns:
        Array c of shape (len(x), m + 1); c[j, k] weights node j for the k-th derivative
    """
    n = len(x)
    c = np.zeros((n, m + 1))
    c1 = 1.0
    c4 = x[0] - z
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, m)
        c2 = 1.0
        c5 = c4
        c4 = x[i] - z
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c


@dataclass(frozen=True)
class StencilOperator:
    """Affine derivative operator D f = matrix @ f + offset."""
    matrix: sparse.csr_matrix
    offset: np.ndarray
    order: int

    def __call__(self, values: np.ndarray) -> np.ndarray:
        return self.matrix @ values + self.offset

    def linear(self, values: np.ndarray) -> np.ndarray:
        """Apply only the linear part (used for perturbations)."""
        return self.matrix @ values


def _ghost_entry(rule: GhostRule, k: int, h: float, mirror_index: int, end_index: int):
    """Column, coefficient and constant contributed by the k-th ghost beyond an end."""
    if rule.kind is GhostKind.MIRROR:
        return mirror_index, rule.parity, rule.shift * k * h
    if rule.kind is GhostKind.DECAY:
        return end_index, float(np.exp(-rule.rate * k * h)), 0.0
    raise ValueError(f"Ghost rule {rule.kind.value} has no ghost values")


@lru_cache(maxsize=128)
def build_operator(n: int, h: float, order: int,
                   inner: GhostRule = ONE_SIDED,
                   outer: GhostRule = ONE_SIDED) -> StencilOperator:
    """
    Assemble the derivative operator of the given order (1 or 2).

    Args:
        n: Number of nodes
        h: Uniform spacing
        order: Derivative order
        inner: Closure at node 0
        outer: Closure at node n-1
    """
    if n < ONE_SIDED_WINDOW:
        raise ValueError(f"Need at least {ONE_SIDED_WINDOW} nodes, got {n}")
    if order not in (1, 2):
        raise ValueError(f"Unsupported derivative order {order}")

    scale = h ** order
    centered = fornberg_weights(0.0, CENTERED_OFFSETS.astype(float), order)[:, order] / scale

    rows, cols, vals = [], [], []
    offset = np.zeros(n)

    for i in range(n):
        near_inner = i < 2 and inner.kind is GhostKind.ONE_SIDED
        near_outer = i > n - 3 and outer.kind is GhostKind.ONE_SIDED
        if near_inner or near_outer:
            start = 0 if near_inner else n - ONE_SIDED_WINDOW
            window = np.arange(start, start + ONE_SIDED_WINDOW)
            weights = fornberg_weights(float(i), window.astype(float), order)[:, order] / scale
            rows.extend([i] * ONE_SIDED_WINDOW)
            cols.extend(window.tolist())
            vals.extend(weights.tolist())
            continue

        for off, w in zip(CENTERED_OFFSETS, centered):
            j = i + int(off)
            if j < 0:
                k = -j
                col, coef, const = _ghost_entry(inner, k, h, k, 0)
            elif j > n - 1:
                k = j - (n - 1)
                col, coef, const = _ghost_entry(outer, k, h, n - 1 - k, n - 1)
            else:
                col, coef, const = j, 1.0, 0.0
            rows.append(i)
            cols.append(col)
            vals.append(w * coef)
            offset[i] += w * const

    matrix = sparse.csr_matrix((vals, (rows, cols)), shape=(n, n))
    logger.debug(f"Built order-{order} stencil: n={n}, inner={inner.kind.value}, outer={outer.kind.value}")
    return StencilOperator(matrix=matrix, offset=offset, order=order)


def derivative_pair(n: int, h: float, inner: GhostRule = ONE_SIDED,
                    outer: GhostRule = ONE_SIDED):
    """First and second derivative operators sharing one closure."""
    return build_operator(n, h, 1, inner, outer), build_operator(n, h, 2, inner, outer)
