"""
Tests for the finite-difference stencils and their ghost-value closures.
"""

import numpy as np
import pytest

from crflow.geometries.stencils import (
    ONE_SIDED,
    build_operator,
    decay,
    derivative_pair,
    fornberg_weights,
    mirror,
)


class TestFornbergWeights:
    """Weights against the textbook five-point stencils."""

    def test_centered_first_derivative(self):
        w = fornberg_weights(0.0, np.arange(-2.0, 3.0), 1)[:, 1]
        np.testing.assert_allclose(w, np.array([1, -8, 0, 8, -1]) / 12.0, atol=1e-14)

    def test_centered_second_derivative(self):
        w = fornberg_weights(0.0, np.arange(-2.0, 3.0), 2)[:, 2]
        np.testing.assert_allclose(w, np.array([-1, 16, -30, 16, -1]) / 12.0, atol=1e-13)

    def test_weights_sum_to_zero_for_derivatives(self):
        w = fornberg_weights(0.0, np.arange(6.0), 2)
        assert abs(w[:, 1].sum()) < 1e-12
        assert abs(w[:, 2].sum()) < 1e-12
        assert w[:, 0].sum() == pytest.approx(1.0)


class TestPolynomialExactness:
    """Fourth-order stencils differentiate quartics exactly."""

    def setup_method(self):
        self.n = 21
        self.x = np.linspace(0.0, 1.0, self.n)
        self.h = self.x[1] - self.x[0]

    def test_first_derivative_of_quartic(self):
        d1 = build_operator(self.n, self.h, 1)
        np.testing.assert_allclose(d1(self.x ** 4), 4 * self.x ** 3, atol=1e-9)

    def test_second_derivative_of_quartic(self):
        d2 = build_operator(self.n, self.h, 2)
        np.testing.assert_allclose(d2(self.x ** 4), 12 * self.x ** 2, atol=1e-7)

    def test_one_sided_operator_has_no_offset(self):
        d1, d2 = derivative_pair(self.n, self.h)
        assert not np.any(d1.offset)
        assert not np.any(d2.offset)


class TestGhostClosures:
    """Mirror and decay rules at the ends of the grid."""

    @staticmethod
    def grid(n):
        x = np.linspace(0.0, 1.0, n)
        return x, x[1] - x[0]

    def test_even_mirror_converges_at_fourth_order(self):
        errors = []
        for n in (41, 81):
            x, h = self.grid(n)
            d1 = build_operator(n, h, 1, mirror(1.0), ONE_SIDED)
            errors.append(np.max(np.abs(d1(np.cos(x)) + np.sin(x))))
        assert errors[0] / errors[1] > 12.0

    def test_odd_mirror_second_derivative(self):
        x, h = self.grid(201)
        d2 = build_operator(201, h, 2, mirror(-1.0), ONE_SIDED)
        np.testing.assert_allclose(d2(np.sin(x)), -np.sin(x), atol=1e-6)

    def test_shifted_mirror_enters_through_the_offset(self):
        # f(-x) = f(x) + 2x for f = cos x - x
        x, h = self.grid(201)
        d1 = build_operator(201, h, 1, mirror(1.0, 2.0), ONE_SIDED)
        np.testing.assert_allclose(d1(np.cos(x) - x), -np.sin(x) - 1.0, atol=1e-6)
        assert np.any(d1.offset != 0.0)
        np.testing.assert_allclose(d1.linear(np.ones(201)), 0.0, atol=1e-9)

    def test_decay_ghosts_are_exact_for_exponentials(self):
        x, h = self.grid(101)
        d1 = build_operator(101, h, 1, ONE_SIDED, decay(2.0))
        f = np.exp(-2.0 * x)
        np.testing.assert_allclose(d1(f)[-3:], -2.0 * f[-3:], rtol=1e-6)


class TestOperatorValidation:

    def test_too_few_nodes(self):
        with pytest.raises(ValueError, match="at least 6"):
            build_operator(5, 0.1, 1)

    def test_unsupported_order(self):
        with pytest.raises(ValueError, match="order"):
            build_operator(10, 0.1, 3)
