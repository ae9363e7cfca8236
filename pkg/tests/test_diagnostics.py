"""
Tests for mass extrapolation, decay checks, frame records and the radial mass identity.
"""

import numpy as np
import pytest

from crflow.diagnostics.functionals import (
    adm_mass,
    asymptotic_flatness_check,
    default_mass_radii,
    mass_profile,
    volume_integral,
)
from crflow.diagnostics.identities import mass_derivative_check, q_monotonicity_check
from crflow.diagnostics.records import TIMESERIES_COLUMNS, FrameRecorder
from crflow.flowcore.exceptions import InsufficientDecay, UnsupportedGeometry
from crflow.flowcore.flow_engine import run_flow
from crflow.flowcore.flow_types import FlowConfig, FlowKind, FlowState, GeometryKind
from crflow.flowcore.tensors import PressureField
from crflow.geometries.homogeneous import curvature_homogeneous
from crflow.geometries.initial_data import injected_tail
from crflow.geometries.radial import (
    InnerClosure,
    OuterClosure,
    RadialMetric,
    build_radial_grid,
    ricci_radial,
)
from crflow.geometries.radial_geometry import RadialGeometry


@pytest.fixture
def wide_grid():
    return build_radial_grid(1.0, 1e5, 800)


class TestAdmMass:

    def test_exact_profile(self, wide_grid):
        # B² = 1 + c/ρ gives m(R) = 2c on every sphere
        c = 0.2
        profile = np.sqrt(1.0 + c / wide_grid.nodes)
        g = RadialMetric(wide_grid, profile, profile.copy(), 1.0, InnerClosure.ONE_SIDED, OuterClosure.TAIL)
        estimate = adm_mass(g, [1e2, 1e3, 1e4])
        assert estimate.mass == pytest.approx(2.0 * c, rel=0.01)
        assert len(estimate.extrapolants) == 2
        assert not estimate.fitted

    def test_schwarzschild(self, schwarzschild_factory):
        estimate = adm_mass(schwarzschild_factory(400))
        assert estimate.mass == pytest.approx(0.4, rel=0.01)
        assert estimate.error <= 0.1 * estimate.mass

    def test_schwarzschild_profile_is_flat(self, schwarzschild_factory):
        g = schwarzschild_factory(400)
        values = mass_profile(g, default_mass_radii(g))
        np.testing.assert_allclose(values, 0.4, rtol=0.02)

    def test_flat_space_has_no_mass(self, flat_metric):
        assert adm_mass(flat_metric).mass == pytest.approx(0.0, abs=1e-10)

    def test_perturbed_slice_keeps_the_mass(self, perturbed_factory):
        estimate = adm_mass(perturbed_factory(400))
        assert estimate.mass == pytest.approx(0.4, rel=0.01)
        assert estimate.error <= 0.1 * estimate.mass

    def test_flat_space_in_bumped_coordinates(self):
        # ρ ↦ ρ·e^σ(ln ρ) pulls g_e back to A = e^σ(1 + σ'), B = e^σ
        grid = build_radial_grid(0.01, 1000.0, 256)
        x = grid.x
        sigma = 0.1 * np.exp(-(x / 0.5) ** 2)
        B = np.exp(sigma)
        A = B * (1.0 - 8.0 * x * sigma)
        g = RadialMetric(grid, A, B, 1.0, InnerClosure.ONE_SIDED, OuterClosure.TAIL)
        estimate = adm_mass(g)
        assert estimate.mass == 0.0
        assert estimate.error <= 1e-4

    def test_small_mass_is_kept(self, wide_grid):
        c = 1e-3
        profile = np.sqrt(1.0 + c / wide_grid.nodes)
        g = RadialMetric(wide_grid, profile, profile.copy(), 1.0, InnerClosure.ONE_SIDED, OuterClosure.TAIL)
        assert adm_mass(g, [1e2, 1e3, 1e4]).mass == pytest.approx(2.0 * c, rel=0.01)

    def test_fitted_decay(self, wide_grid):
        c = 0.2
        profile = np.sqrt(1.0 + c / wide_grid.nodes + 0.5 / wide_grid.nodes ** 2)
        g = RadialMetric(wide_grid, profile, profile.copy(), None, InnerClosure.ONE_SIDED, OuterClosure.TAIL)
        estimate = adm_mass(g, np.geomspace(10.0, 1e4, 6))
        assert estimate.fitted
        assert estimate.mass == pytest.approx(2.0 * c, rel=0.02)

    def test_slow_tail_is_rejected(self, wide_grid):
        g = injected_tail(wide_grid, 0.1, 0.25, tau=1.0)
        with pytest.raises(InsufficientDecay):
            adm_mass(g)

    @pytest.mark.parametrize("radii,match", [
        ([1e2, 1e3], "at least 3"),
        ([1e2, 1e3, 1e6], "lie in"),
        ([100.0, 200.0, 300.0], "decade"),
    ])
    def test_invalid_radii(self, wide_grid, radii, match):
        g = injected_tail(wide_grid, 0.1, 1.0, tau=1.0)
        with pytest.raises(ValueError, match=match):
            adm_mass(g, radii)

    def test_homogeneous_metric(self, squashed):
        with pytest.raises(UnsupportedGeometry):
            adm_mass(squashed)


class TestAsymptoticFlatness:

    def test_schwarzschild_passes(self, schwarzschild_factory):
        report = asymptotic_flatness_check(schwarzschild_factory(400))
        assert report.ok
        assert report.slopes[0] == pytest.approx(-1.0, abs=0.1)

    def test_slow_tail_fails_first_slope(self, wide_grid):
        report = asymptotic_flatness_check(injected_tail(wide_grid, 0.1, 0.25, tau=1.0))
        assert not report.passed[0]
        assert not report.ok

    def test_flat_space(self, flat_metric):
        assert asymptotic_flatness_check(flat_metric).ok


class TestVolumeIntegral:

    def test_tail_bound_for_decaying_density(self, schwarzschild_factory):
        g = schwarzschild_factory(400)
        integral = volume_integral(g, ricci_radial(g).ric_norm_sq)
        assert integral.value > 0.0
        assert integral.tail_bound is not None
        assert 0.0 <= integral.tail_bound < 1e-3 * integral.value


class TestFrameRecorder:

    @staticmethod
    def state(g, curvature, pressure):
        return FlowState(t=0.0, metric=g, pressure=PressureField(pressure, 0.0), curvature=curvature)

    def test_homogeneous_row(self, squashed):
        record = FrameRecorder()(self.state(squashed, curvature_homogeneous(squashed, 4.0), -8.0 / 3.0))
        row = record.to_row()
        assert tuple(row) == TIMESERIES_COLUMNS
        assert row['s_min'] == pytest.approx(4.0)
        assert row['constraint_drift'] < 1e-12
        assert row['vol'] > 0.0 and row['Q'] > 0.0
        assert row['mass'] is None
        assert row['dev_l2'] == pytest.approx(96.0 / 9.0 * row['vol'])

    def test_radial_row(self, schwarzschild_factory):
        g = schwarzschild_factory(400)
        record = FrameRecorder()(self.state(g, ricci_radial(g), np.zeros(400)))
        assert record.vol is None and record.Q is None
        assert record.mass == pytest.approx(0.4, rel=0.01)
        assert record.ric_l2 == pytest.approx(record.dev_l2)

    def test_missing_mass_is_nan(self, wide_grid):
        g = injected_tail(wide_grid, 0.1, 0.25, tau=1.0)
        record = FrameRecorder()(self.state(g, ricci_radial(g), np.zeros(800)))
        assert np.isnan(record.mass)

    def test_volume_residual_filled_after_run(self, squashed):
        config = FlowConfig(geometry_kind=GeometryKind.HOMOGENEOUS, s0=4.0, t_end=0.05, n_steps=5)
        trajectory = run_flow(config, squashed)
        residuals = [r.theta_check for r in trajectory.diagnostics]
        assert residuals[0] is None and residuals[-1] is None
        assert all(r is not None for r in residuals[1:-1])


class TestIdentityGuards:

    def test_mass_identity_needs_radial_run(self, squashed):
        trajectory = run_flow(FlowConfig(geometry_kind=GeometryKind.HOMOGENEOUS, s0=4.0, t_end=0.05,
                                         n_steps=5), squashed)
        with pytest.raises(UnsupportedGeometry):
            mass_derivative_check(trajectory)

    def test_q_needs_homogeneous_run(self, flat_metric):
        dt0 = RadialGeometry().time_step(flat_metric, 0.2)
        trajectory = run_flow(FlowConfig(t_end=3 * dt0, n_steps=3), flat_metric)
        with pytest.raises(UnsupportedGeometry):
            q_monotonicity_check(trajectory)

    def test_too_few_frames(self, squashed):
        trajectory = run_flow(FlowConfig(geometry_kind=GeometryKind.HOMOGENEOUS, s0=4.0, t_end=0.01,
                                         n_steps=1), squashed)
        with pytest.raises(ValueError, match="at least 3"):
            q_monotonicity_check(trajectory)


@pytest.mark.slow
class TestMassEvolution:
    """Schwarzschild slice: mass falls under crf and is conserved under Ricci flow."""

    @staticmethod
    def run(schwarzschild_factory, flow_kind, refine=1):
        # refine multiplies N by refine and the step count by refine², same frame times
        t_end = 500 * RadialGeometry().time_step(schwarzschild_factory(400), 0.2)
        g0 = schwarzschild_factory(400 * refine)
        config = FlowConfig(flow_kind=flow_kind, t_end=t_end, n_steps=500 * refine ** 2,
                            output_stride=10 * refine ** 2, constraint_tolerance=1e-3)
        return run_flow(config, g0)

    def test_mass_identity_under_crf(self, schwarzschild_factory):
        report = mass_derivative_check(self.run(schwarzschild_factory, FlowKind.CRF))
        assert report.monotone_decreasing
        assert report.max_relative_residual <= 0.05

    def test_mass_identity_improves_with_resolution(self, schwarzschild_factory):
        radii = np.geomspace(10.0, 900.0, 5)
        coarse = mass_derivative_check(self.run(schwarzschild_factory, FlowKind.CRF), radii)
        fine = mass_derivative_check(self.run(schwarzschild_factory, FlowKind.CRF, refine=2), radii)
        assert fine.monotone_decreasing
        assert fine.max_relative_residual <= 0.05
        assert fine.max_relative_residual < coarse.max_relative_residual

    def test_mass_conserved_under_ricci_flow(self, schwarzschild_factory):
        report = mass_derivative_check(self.run(schwarzschild_factory, FlowKind.RICCI))
        assert report.max_relative_mass_change <= 0.05
