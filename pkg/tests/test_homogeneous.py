"""
Tests for left-invariant metrics: frame curvature, pressure and spectrum.
"""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from chart_oracle import homogeneous_orthonormal_ricci, milnor_ricci
from crflow.flowcore.exceptions import InvalidMetric, NonInvertibleOperator, UnsupportedGeometry
from crflow.flowcore.tensors import PressureStatus
from crflow.diagnostics.functionals import volume, yamabe_quotient
from crflow.geometries.homogeneous import (
    HomogeneousMetric,
    curvature_homogeneous,
    frame_curvature,
    invertibility_estimate_homogeneous,
    laplacian_spectrum,
    milnor_structure_constants,
    pressure_homogeneous,
    ricci_evolution_rhs,
)
from crflow.geometries.initial_data import round_homogeneous, squashed_homogeneous

coefficient = st.floats(0.3, 3.0)


class TestRoundSphere:
    """The round metric of curvature 1 on the 3-sphere group."""

    def test_ricci_is_twice_the_metric(self):
        curvature = curvature_homogeneous(round_homogeneous(), 6.0)
        np.testing.assert_allclose(curvature.ric.components, 2.0, atol=1e-12)
        assert curvature.scalar == pytest.approx(6.0, abs=1e-12)
        assert curvature.deviation_norm_sq == pytest.approx(0.0, abs=1e-24)

    def test_volume_and_yamabe_quotient(self):
        g = round_homogeneous()
        assert volume(g) == pytest.approx(2.0 * np.pi ** 2, rel=1e-12)
        assert yamabe_quotient(g) == pytest.approx(6.0 * (2.0 * np.pi ** 2) ** (2.0 / 3.0), rel=1e-12)
        assert yamabe_quotient(g) == pytest.approx(43.8, abs=0.05)

    def test_ricci_evolution_vanishes(self):
        np.testing.assert_allclose(ricci_evolution_rhs(round_homogeneous()), 0.0, atol=1e-12)

    def test_spectrum(self):
        spectrum = laplacian_spectrum(round_homogeneous(), max_two_j=4)
        # 4j(j+1), each spin block listed once
        values = np.unique(np.round(spectrum, 9))
        np.testing.assert_allclose(values, [0.0, 3.0, 8.0, 15.0, 24.0], atol=1e-9)
        assert np.sum(np.isclose(spectrum, 3.0)) == 2

    def test_round_target_is_resonant(self):
        report = invertibility_estimate_homogeneous(round_homogeneous(), 6.0)
        assert report.status is PressureStatus.NEAR_RESONANT


class TestSquashedSphere:

    def test_scalar_curvature_of_one_one_two(self):
        curvature = curvature_homogeneous(squashed_homogeneous((1.0, 1.0, 2.0)), 4.0)
        assert curvature.scalar == pytest.approx(4.0, abs=1e-12)
        np.testing.assert_allclose(curvature.ric.components, [0.0, 0.0, 4.0], atol=1e-12)
        assert curvature.deviation_norm_sq == pytest.approx(96.0 / 9.0, rel=1e-12)

    def test_pressure_is_constant(self):
        curvature = curvature_homogeneous(squashed_homogeneous(), 4.0)
        p = pressure_homogeneous(curvature.deviation_norm_sq, 4.0)
        assert p.values == pytest.approx(-96.0 / 36.0, rel=1e-12)
        assert p.residual_norm < 1e-12

    def test_squashed_target_is_not_resonant(self):
        report = invertibility_estimate_homogeneous(squashed_homogeneous(), 4.0)
        assert report.status is PressureStatus.OK
        assert report.sigma_min == pytest.approx(1.0, abs=1e-9)


class TestFrameCurvature:
    """Frame curvature against a Euler-angle chart and the closed-form principal curvatures."""

    @given(g1=coefficient, g2=coefficient, g3=coefficient)
    def test_matches_closed_form(self, g1, g2, g3):
        g = HomogeneousMetric(np.array([g1, g2, g3]))
        np.testing.assert_allclose(curvature_homogeneous(g).ric.components, milnor_ricci([g1, g2, g3]),
                                   atol=1e-10 * (1.0 + 4.0 / min(g1, g2, g3)))

    @given(g1=coefficient, g2=coefficient, g3=coefficient)
    def test_matches_euler_chart(self, g1, g2, g3):
        expected = homogeneous_orthonormal_ricci([g1, g2, g3])
        ric = curvature_homogeneous(HomogeneousMetric(np.array([g1, g2, g3]))).ric.components
        scale = 1.0 + np.max(np.abs(expected))
        np.testing.assert_allclose(ric, np.diag(expected), atol=1e-6 * scale)
        off_diagonal = expected - np.diag(np.diag(expected))
        assert np.max(np.abs(off_diagonal)) <= 1e-6 * scale

    @given(lam=st.tuples(st.floats(0.5, 3.0), st.floats(0.5, 3.0), st.floats(0.5, 3.0)),
           coeffs=st.tuples(coefficient, coefficient, coefficient))
    def test_other_milnor_frames(self, lam, coeffs):
        g = squashed_homogeneous(coeffs, lam)
        np.testing.assert_allclose(curvature_homogeneous(g).ric.components, milnor_ricci(coeffs, lam),
                                   atol=1e-9 * (1.0 + 9.0 / min(coeffs)))

    def test_scaling(self):
        g = squashed_homogeneous((0.7, 1.3, 2.1))
        base = curvature_homogeneous(g)
        scaled = curvature_homogeneous(g.scaled(3.0))
        np.testing.assert_allclose(scaled.ric.components, base.ric.components / 3.0, rtol=1e-12, atol=1e-14)

    def test_riemann_symmetries(self):
        R = frame_curvature(squashed_homogeneous((0.7, 1.3, 2.1))).riemann
        np.testing.assert_allclose(R, -np.swapaxes(R, 0, 1), atol=1e-12)
        np.testing.assert_allclose(R, -np.swapaxes(R, 2, 3), atol=1e-12)
        np.testing.assert_allclose(R, np.einsum('ijkl->klij', R), atol=1e-12)


class TestValidation:

    def test_non_positive_coefficient(self):
        with pytest.raises(InvalidMetric):
            HomogeneousMetric(np.array([1.0, -1.0, 1.0]))

    def test_non_antisymmetric_structure_constants(self):
        c = milnor_structure_constants()
        c[0, 1, 2] = 5.0
        with pytest.raises(InvalidMetric):
            HomogeneousMetric(np.ones(3), c)

    def test_pressure_needs_nonzero_target(self):
        with pytest.raises(NonInvertibleOperator):
            pressure_homogeneous(1.0, 0.0)

    def test_spectrum_needs_compact_group(self):
        g = squashed_homogeneous((1.0, 1.0, 1.0), (1.0, 1.0, 0.0))
        with pytest.raises(UnsupportedGeometry):
            laplacian_spectrum(g)
