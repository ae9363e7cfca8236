"""
Tests for the finite-difference Jacobian probe.
"""

import pytest

from crflow.diagnostics.linearization import fd_jacobian_probe
from crflow.flowcore.flow_types import FlowKind
from crflow.geometries.initial_data import flat, round_homogeneous
from crflow.geometries.radial import InnerClosure, build_radial_grid


class TestHomogeneousProbe:

    def test_round_metric(self):
        report = fd_jacobian_probe(round_homogeneous(), s0=6.0)
        assert report.size == 3
        assert report.all_real
        assert report.step_consistency <= 1e-6
        assert len(report.leading) == 3

    def test_crf_and_dtcrf_agree(self, squashed):
        gauged = fd_jacobian_probe(squashed, s0=4.0)
        plain = fd_jacobian_probe(squashed, s0=4.0, flow_kind=FlowKind.CRF)
        assert gauged.leading == pytest.approx(plain.leading, abs=1e-9)

    def test_n_modes(self, squashed):
        assert len(fd_jacobian_probe(squashed, s0=4.0, n_modes=2).leading) == 2


class TestRadialProbe:

    def test_too_many_unknowns(self):
        g = flat(build_radial_grid(0.01, 1000.0, 128))
        with pytest.raises(ValueError, match="exceeds"):
            fd_jacobian_probe(g)

    @pytest.mark.slow
    def test_stiffness_grows_like_inverse_spacing_squared(self):
        reports = [fd_jacobian_probe(flat(build_radial_grid(0.1, 10.0, n), InnerClosure.REFLECT), n_modes=1)
                   for n in (32, 64)]
        assert reports[0].size == 64 and reports[1].size == 128
        ratio = reports[1].min_real / reports[0].min_real
        assert ratio == pytest.approx(4.0, rel=0.25)
