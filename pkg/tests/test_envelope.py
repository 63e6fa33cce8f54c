"""Envelope analysis: area fractions, gains, gaps, and exports."""

import io
import math

import numpy as np
import pytest

from conftest import REF_CONST, REF_LIMITS, REF_VAR
from lookahead_guidance import (
    BoundUndefined,
    ConstantLookahead,
    DegenerateBaseline,
    GridSpec,
    GuidanceLimits,
    VariableLookahead,
    boundary_curve,
    boundary_gap,
    compute_envelope,
    envelope_gain,
    far_field_boundary_gap,
    far_field_time_gain,
    los_length,
    paper_envelope_config,
    polar_map_export,
    ratio_sweep,
    region_grid,
    unsaturated_fraction,
)
from lookahead_guidance.envelope import (
    write_boundary_csv,
    write_envelope_grid_csv,
    write_polar_csv,
    write_summary_csv,
)

REF = paper_envelope_config()


class TestGridSpec:
    def test_defaults(self):
        grid = GridSpec()
        assert grid.d_nodes()[0] == 0.0
        assert grid.d_nodes()[-1] == 200.0
        assert grid.eta_nodes()[0] == -math.pi
        assert len(grid.d_nodes()) == 1000

    def test_validation(self):
        with pytest.raises(ValueError):
            GridSpec(d_min=10.0, d_max=5.0)
        with pytest.raises(ValueError):
            GridSpec(eta_min=1.0, eta_max=-1.0)
        with pytest.raises(ValueError):
            GridSpec(n_d=1)
        with pytest.raises(ValueError):
            GridSpec(d_min=-300.0, d_max=200.0, kappa=0.005)


class TestUnsaturatedFraction:
    def test_vanishing_turn_radius_unlocks_half_plane(self):
        limits = GuidanceLimits(V_u=50.0, R_min=1e-6)
        grid = GridSpec(n_d=400, n_eta=400)
        frac = unsaturated_fraction(REF_CONST, grid, limits)
        assert frac == pytest.approx(0.5, abs=0.01)

    def test_reference_fractions(self):
        a_const = unsaturated_fraction(REF.profiles[0], REF.grid, REF.limits)
        a_var = unsaturated_fraction(REF.profiles[1], REF.grid, REF.limits)
        assert a_const * 100 == pytest.approx(23.86, abs=0.5)
        assert a_var * 100 == pytest.approx(41.17, abs=0.5)

    def test_grid_refinement_stable(self):
        coarse = unsaturated_fraction(REF.profiles[0], REF.grid, REF.limits)
        fine_grid = GridSpec(
            d_min=0.0, d_max=200.0, eta_min=-math.pi, eta_max=math.pi,
            n_d=2000, n_eta=2000, kappa=REF.grid.kappa,
        )
        fine = unsaturated_fraction(REF.profiles[0], fine_grid, REF.limits)
        assert abs(fine - coarse) * 100 < 0.3


class TestEnvelopeGain:
    def test_identical_profiles_zero_gain(self):
        grid = GridSpec(n_d=200, n_eta=200)
        g_abs, g_rel = envelope_gain(grid, REF_LIMITS, REF_CONST, REF_CONST)
        assert g_abs == 0.0
        assert g_rel == 0.0

    def test_degenerate_variable_profile_zero_gain(self):
        grid = GridSpec(n_d=200, n_eta=200)
        flat = VariableLookahead(L_min=50.0, L_max=50.0, d_c=30.0)
        g_abs, g_rel = envelope_gain(grid, REF_LIMITS, REF_CONST, flat)
        assert g_abs == 0.0
        assert g_rel == 0.0

    def test_reference_gains(self):
        g_abs, g_rel = envelope_gain(
            REF.grid, REF.limits, REF.profiles[0], REF.profiles[1]
        )
        assert g_abs == pytest.approx(17.32, abs=0.7)
        assert g_rel == pytest.approx(72.58, abs=3.0)

    def test_degenerate_baseline(self):
        # No grid node has |eta| small enough to be unsaturated.
        grid = GridSpec(d_min=0.0, d_max=1.0, eta_min=0.5, eta_max=1.0,
                        n_d=50, n_eta=50)
        limits = GuidanceLimits(V_u=1.0, R_min=1000.0)
        tiny = ConstantLookahead(0.001)
        with pytest.raises(DegenerateBaseline):
            envelope_gain(grid, limits, tiny, tiny)


class TestRatioSweep:
    def test_shape(self):
        grid = GridSpec(n_d=300, n_eta=300, kappa=REF.grid.kappa)
        series = ratio_sweep(
            np.arange(1.0, 5.25, 0.5), grid, REF.limits, L_min=50.0, d_c=30.0
        )
        ratios = [r for r, _, _ in series]
        g_abs = [g for _, g, _ in series]
        g_rel = [g for _, _, g in series]
        assert ratios[0] == 1.0
        assert g_abs[0] == 0.0 and g_rel[0] == 0.0
        assert all(b >= a - 1e-12 for a, b in zip(g_abs, g_abs[1:]))
        assert all(b >= a - 1e-12 for a, b in zip(g_rel, g_rel[1:]))

    def test_rejects_ratios_below_one(self):
        with pytest.raises(ValueError):
            ratio_sweep([0.5], GridSpec(n_d=10, n_eta=10), REF_LIMITS, 50.0, 30.0)


class TestBoundaryGap:
    def test_zero_on_path(self):
        gap = boundary_gap(0.0, 0.0, REF_CONST, REF_VAR, REF_LIMITS)
        assert gap.delta_L1 == pytest.approx(0.0, abs=1e-12)
        assert gap.delta_eta_bar_exact == pytest.approx(0.0, abs=1e-12)

    def test_reference_point(self):
        gap = boundary_gap(30.0, 0.0, REF_CONST, REF_VAR, REF_LIMITS)
        L1_v = math.sqrt(30.0**2 + 113.21205588285576**2)
        L1_c = math.sqrt(30.0**2 + 50.0**2)
        assert L1_v == pytest.approx(117.12, abs=0.01)
        assert L1_c == pytest.approx(58.31, abs=0.01)
        assert gap.delta_L1 == pytest.approx(58.81, abs=0.01)
        # factorised form equals the direct difference
        assert gap.delta_L1 == pytest.approx(L1_v - L1_c, rel=1e-10)
        assert gap.delta_eta_bar_exact >= 0.0

    def test_factorization_matches_direct_difference_on_grid(self):
        for d in np.linspace(-150.0, 200.0, 40):
            for kappa in (-0.004, 0.0, 0.004):
                try:
                    gap = boundary_gap(d, kappa, REF_CONST, REF_VAR, REF_LIMITS)
                except BoundUndefined:
                    continue
                L0_v = 50.0 + 100.0 * (1.0 - math.exp(-abs(d) / 30.0))
                direct = float(
                    los_length(L0_v, d, kappa) - los_length(50.0, d, kappa)
                )
                assert gap.delta_L1 == pytest.approx(direct, rel=1e-10, abs=1e-12)
                assert gap.delta_eta_bar_exact >= -1e-15

    def test_bound_undefined_when_los_reaches_diameter(self):
        with pytest.raises(BoundUndefined):
            boundary_gap(1000.0, 0.0, REF_CONST, REF_VAR, REF_LIMITS)


class TestFarField:
    def test_gap_value(self):
        gap = far_field_boundary_gap(REF_LIMITS, REF_CONST, REF_VAR)
        assert gap == pytest.approx(math.asin(0.75) - math.asin(0.25), rel=1e-12)
        assert gap == pytest.approx(0.59538, abs=1e-4)

    def test_time_gain_value(self):
        dt_far = far_field_time_gain(REF_LIMITS, REF_CONST, REF_VAR)
        assert dt_far == pytest.approx(2.0 * 0.5953818, abs=1e-4)

    def test_degenerate_profile_zero(self):
        flat = VariableLookahead(L_min=50.0, L_max=50.0, d_c=30.0)
        assert far_field_time_gain(REF_LIMITS, REF_CONST, flat) == pytest.approx(0.0)

    def test_speed_scaling(self):
        fast = GuidanceLimits(V_u=100.0, R_min=100.0)
        assert far_field_time_gain(fast, REF_CONST, REF_VAR) == pytest.approx(
            0.5 * far_field_time_gain(REF_LIMITS, REF_CONST, REF_VAR)
        )

    def test_undefined_beyond_diameter(self):
        wide = VariableLookahead(L_min=50.0, L_max=250.0, d_c=30.0)
        with pytest.raises(BoundUndefined):
            far_field_boundary_gap(REF_LIMITS, REF_CONST, wide)


class TestRegionsAndBoundaries:
    def test_boundaries_ordered_and_monotone(self):
        grid = GridSpec(n_d=400, n_eta=10)
        eb_c = boundary_curve(REF_CONST, grid, REF_LIMITS)
        eb_v = boundary_curve(REF_VAR, grid, REF_LIMITS)
        assert np.all(eb_v >= eb_c - 1e-15)
        assert np.all(np.diff(eb_c) >= -1e-12)
        assert np.all(np.diff(eb_v) >= -1e-12)

    def test_mirror_symmetry(self):
        grid = GridSpec(n_d=60, n_eta=61)
        regions = region_grid(REF_VAR, grid, REF_LIMITS)
        flipped = regions[:, ::-1]
        swap = {"S1": "S1", "S2": "S3", "S3": "S2"}
        for row, frow in zip(regions, flipped):
            assert [swap[r] for r in row] == list(frow)

    def test_containment_nodewise(self):
        grid = GridSpec(n_d=80, n_eta=81, kappa=0.002)
        r_c = region_grid(REF_CONST, grid, REF_LIMITS)
        r_v = region_grid(REF_VAR, grid, REF_LIMITS)
        assert np.all((r_c != "S1") | (r_v == "S1"))


class TestPolarMap:
    # Nodes are ordered d-major: index = i * n_eta + j.
    grid = GridSpec(d_min=0.0, d_max=100.0, eta_min=0.0, eta_max=math.pi / 2,
                    n_d=3, n_eta=3)

    def test_points_and_regions(self):
        polar = polar_map_export(self.grid, REF_LIMITS, REF_CONST)
        # every d = 0 node collapses to the origin regardless of eta
        for j in range(3):
            assert (polar.x[j], polar.y[j]) == (0.0, 0.0)
        # (d=100, eta=0) -> (100, 0), never saturated
        i = 2 * 3 + 0
        assert (polar.x[i], polar.y[i]) == pytest.approx((100.0, 0.0))
        assert polar.region[i] == "S1"
        # (d=100, eta=pi/2) lies above the boundary arcsin(0.559)
        i = 2 * 3 + 2
        assert (polar.x[i], polar.y[i]) == pytest.approx((0.0, 100.0), abs=1e-9)
        assert polar.region[i] == "S2"

    def test_variable_widens_the_wedge(self):
        # eta = 0.8 at d = 100 saturates the constant law but not the
        # variable one (boundaries 0.593 and 1.089).
        grid = GridSpec(d_min=0.0, d_max=100.0, eta_min=0.0, eta_max=0.8,
                        n_d=2, n_eta=2)
        node = 1 * 2 + 1
        const = polar_map_export(grid, REF_LIMITS, REF_CONST)
        var = polar_map_export(grid, REF_LIMITS, REF_VAR)
        assert const.region[node] == "S2"
        assert var.region[node] == "S1"

    def test_rejects_negative_d(self):
        grid = GridSpec(d_min=-10.0, d_max=10.0, n_d=3, n_eta=3)
        with pytest.raises(ValueError):
            polar_map_export(grid, REF_LIMITS, REF_CONST)


class TestWriters:
    grid = GridSpec(d_min=0.0, d_max=10.0, eta_min=-0.5, eta_max=0.5,
                    n_d=3, n_eta=4)

    def _report(self):
        return compute_envelope(self.grid, REF_LIMITS, REF_CONST, REF_VAR)

    def test_grid_csv(self):
        out = io.StringIO()
        write_envelope_grid_csv(self._report(), out)
        lines = out.getvalue().splitlines()
        assert lines[0] == "d,eta,eta_bar_c,eta_bar_v,region_c,region_v"
        assert len(lines) == 1 + 3 * 4
        first = lines[1].split(",")
        assert first[0] == "0"
        assert first[4] in ("S1", "S2", "S3")

    def test_boundary_csv(self):
        out = io.StringIO()
        write_boundary_csv(self._report(), out)
        lines = out.getvalue().splitlines()
        assert lines[0] == "d,eta_bar_c,eta_bar_v"
        assert len(lines) == 4

    def test_summary_csv(self):
        report = self._report()
        out = io.StringIO()
        write_summary_csv(report, out)
        lines = out.getvalue().splitlines()
        assert lines[0] == "A_const,A_var,G_abs,G_rel"
        values = [float(v) for v in lines[1].split(",")]
        assert values[0] == pytest.approx(report.A_const)
        assert values[2] == pytest.approx((values[1] - values[0]) * 100, abs=1e-6)

    def test_polar_csv(self):
        polar = polar_map_export(
            GridSpec(d_min=0.0, d_max=10.0, n_d=2, n_eta=2), REF_LIMITS, REF_CONST
        )
        out = io.StringIO()
        write_polar_csv(polar, out)
        lines = out.getvalue().splitlines()
        assert lines[0] == "x,y,region"
        assert len(lines) == 5

    def test_report_invariants(self):
        report = self._report()
        assert report.G_abs == pytest.approx((report.A_var - report.A_const) * 100)
        assert report.G_rel == pytest.approx(
            (report.A_var / report.A_const - 1.0) * 100
        )
        assert report.A_var >= report.A_const
