"""Verification-suite machinery against independent closed forms.

Frozen constants come from tests/oracles/oracle_verify.py: a 1-D
fractional maximal function worked out by hand, the ball potential under
the identity nonlinearity via lens volumes, reduction integrals of an
inverted zygmund-model density through scipy root finding plus quad, and
the composed potential of the unit ball through classical Riesz
identities.  The suite-level tests run small case families; the
full-size runs live in the acceptance module.
"""

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wolfflab.hardy import ReductionParams, rhs_rearrangement_bound, \
    rhs_rearrangement_curve
from wolfflab.monotone import MonotoneFn, NFunction
from wolfflab.potentials import (
    PotentialParams,
    QuadratureSettings,
    finiteness_check,
    frac_maximal,
    havin_mazya,
    wolff,
)
from wolfflab.rearrangement import RadialLift, StepProfile, unit_ball_volume
from wolfflab.verify import (
    DEFAULT_LADDER,
    VerificationReport,
    _assemble,
    _base_mask,
    _refine_grid,
    default_profile_family,
    default_psi_catalog,
    dyadic_ceil,
    dyadic_floor,
    estimate_constant,
    rearranged_potential,
    seeded_step_profiles,
    sup_weighted_average,
    truncated_power_profile,
    verify_appendix,
    verify_hm_wolff,
    verify_lorentz_mappings,
    verify_maximal,
    verify_orlicz_bounds,
    verify_sharpness,
    verify_upper_bound,
)

INF = float("inf")
IDENT = MonotoneFn.identity()
UNIT = StepProfile([0.0, 1.0], [1.0])
TWO_STEP = StepProfile([0.0, 0.5, 2.0], [3.0, 1.0])
Q512 = QuadratureSettings(nodes_per_decade=512)

# oracle_verify.py outputs
RIESZ_W0 = 3.897777089721
RIESZ_W_T1 = 1.948888544860
RIESZ_RHS = {0.5: 2.118898422048, 2.0: 0.944940787421}
RIESZ_RATIO_MAX = 1.399352573605
RIESZ_RATIO_MIN = 0.867912497826
ZYG_RHS = {0.3: 1.378386429587, 1.5: 0.996017747284, 5.0: 0.672474527190}
MAXIMAL_RATIO = 1.414142856998


@st.composite
def profiles(draw):
    m = draw(st.integers(1, 5))
    widths = draw(st.lists(st.floats(0.1, 3.0), min_size=m, max_size=m))
    drops = draw(st.lists(st.floats(0.05, 2.0), min_size=m, max_size=m))
    vals = np.cumsum(np.asarray(drops)[::-1])[::-1]
    edges = np.concatenate([[0.0], np.cumsum(widths)])
    return StepProfile(edges, vals)


class TestDyadicRounding:
    def test_ceil_basic(self):
        assert dyadic_ceil(0.614) == 1.0
        assert dyadic_ceil(1.0) == 1.0
        assert dyadic_ceil(1.0000001) == 2.0
        assert dyadic_ceil(0.1) == 0.125

    def test_floor_basic(self):
        assert dyadic_floor(0.999) == 0.5
        assert dyadic_floor(1.0) == 1.0
        assert dyadic_floor(0.1) == 0.0625

    def test_powers_of_two_are_fixed_points(self):
        for k in range(-40, 41):
            x = 2.0 ** k
            assert dyadic_ceil(x) == x
            assert dyadic_floor(x) == x

    @given(st.floats(1e-20, 1e20))
    @settings(max_examples=120, deadline=None)
    def test_bracketing(self, x):
        up, dn = dyadic_ceil(x), dyadic_floor(x)
        assert dn <= x <= up
        assert up / 2.0 < x <= 2.0 * dn
        assert math.log2(up) == int(math.log2(up))


class TestEstimateConstant:
    def test_equal_sides_give_one(self):
        v = np.array([1.0, 2.0, 3.0])
        assert estimate_constant(v, v) == 1.0

    def test_doubled_lhs(self):
        v = np.array([1.0, 2.0, 3.0])
        assert estimate_constant(2.0 * v, v) == 2.0

    def test_mixed_ratios_round_up(self):
        lhs = np.array([1.0, 2.5])
        rhs = np.array([1.0, 1.0])
        assert estimate_constant(lhs, rhs) == 4.0

    def test_lower_direction_rounds_down(self):
        lhs = np.array([0.9, 3.0])
        rhs = np.array([1.0, 1.0])
        got = estimate_constant(lhs, rhs, direction="lower")
        assert got == 0.5

    def test_zero_pairs_are_uninformative(self):
        lhs = np.array([0.0, 1.0])
        rhs = np.array([0.0, 1.0])
        assert estimate_constant(lhs, rhs) == 1.0

    def test_positive_lhs_against_zero_rhs(self):
        lhs = np.array([1.0])
        rhs = np.array([0.0])
        assert estimate_constant(lhs, rhs) == INF

    def test_all_zero_is_neutral(self):
        z = np.zeros(3)
        assert estimate_constant(z, z) == 1.0

    def test_nonfinite_samples_rejected(self):
        with pytest.raises(ValueError):
            estimate_constant(np.array([1.0, INF]), np.array([1.0, 1.0]))

    def test_inner_scaling_balances_the_pair(self):
        # lhs = 3 * rhs(1); rhs scales linearly in c, so the minimax pair
        # is the dyadic split (2, 2) rather than (4, 1)
        base = np.array([1.0, 2.0])

        def rhs(c):
            return c * base

        got = estimate_constant(3.0 * base, rhs, mode="inner-scaling")
        assert got == (2.0, 2.0)

    def test_inner_scaling_lower(self):
        base = np.array([1.0, 2.0])

        def rhs(c):
            return c * base

        got = estimate_constant(base / 3.0, rhs, mode="inner-scaling",
                                direction="lower")
        assert got == (0.5, 0.5)

    def test_bad_mode_rejected(self):
        with pytest.raises(ValueError):
            estimate_constant(np.ones(2), np.ones(2), mode="additive")

    @given(st.lists(st.floats(0.01, 100.0), min_size=1, max_size=12),
           st.lists(st.floats(0.01, 100.0), min_size=1, max_size=12))
    @settings(max_examples=80, deadline=None)
    def test_upper_fit_covers_every_sample(self, ls, rs):
        m = min(len(ls), len(rs))
        lhs = np.asarray(ls[:m])
        rhs = np.asarray(rs[:m])
        c = estimate_constant(lhs, rhs)
        assert np.all(lhs <= c * rhs * (1.0 + 1e-12))
        assert c / 2.0 < np.max(lhs / rhs)

    @given(st.lists(st.floats(0.01, 100.0), min_size=1, max_size=12),
           st.lists(st.floats(0.01, 100.0), min_size=1, max_size=12))
    @settings(max_examples=80, deadline=None)
    def test_lower_fit_stays_under_every_sample(self, ls, rs):
        m = min(len(ls), len(rs))
        lhs = np.asarray(ls[:m])
        rhs = np.asarray(rs[:m])
        c = estimate_constant(lhs, rhs, direction="lower")
        assert np.all(c * rhs <= lhs * (1.0 + 1e-12))


class TestReportContainer:
    def _report(self):
        return VerificationReport(
            suite="demo", cases=[{"case": 0}], samples=[
                {"case": 0, "label": "upper", "t": 1.0, "lhs": 2.0,
                 "rhs": 4.0, "ratio": 0.5}],
            worst_ratio=0.5, constants={"C1": 1.0}, stability=1e-6,
            threshold=0.05, passed=True)

    def test_json_is_deterministic(self):
        a, b = self._report(), self._report()
        assert a.to_json() == b.to_json()
        payload = json.loads(a.to_json())
        assert payload["constants"] == {"C1": 1.0}
        assert payload["passed"] is True

    def test_csv_header_and_precision(self, tmp_path):
        path = tmp_path / "r.csv"
        self._report().to_csv(str(path))
        lines = path.read_text().strip().split("\n")
        assert lines[0] == "case,label,t,lhs,rhs,ratio"
        assert lines[1].startswith("0,upper,1,2,4,0.5")


class TestGridRefinement:
    def test_midpoints_interleave(self):
        g = np.geomspace(1.0, 16.0, 5)
        r = _refine_grid(g)
        assert r.size == 9
        assert np.allclose(r[::2], g)
        assert np.allclose(r[1::2], np.sqrt(g[:-1] * g[1:]))

    def test_base_mask_selects_originals(self):
        g = np.geomspace(1.0, 16.0, 5)
        r = _refine_grid(g)
        assert np.allclose(r[_base_mask(r.size, 1)], g)
        assert np.all(_base_mask(g.size, 0))


class TestAssembleSemantics:
    # synthetic collects exercise the refinement gate in isolation

    @staticmethod
    def _mk(constants, raw, worst, violated=0):
        return ([], dict(constants), worst, violated,
                {k: v for k, v in raw.items()})

    def test_straddled_boundary_is_accepted(self):
        outs = [self._mk({"C": 4.0}, {"C": 3.999}, 3.999),
                self._mk({"C": 8.0}, {"C": 4.001}, 3.999)]
        rep = _assemble("s", [], lambda lv: outs[lv], 0.05)
        assert rep.passed
        assert rep.constants == {"C": 8.0}
        assert any("dyadic boundary" in x for x in rep.notes)

    def test_large_statistic_move_fails(self):
        outs = [self._mk({"C": 4.0}, {"C": 3.5}, 3.5),
                self._mk({"C": 8.0}, {"C": 4.4}, 3.5)]
        rep = _assemble("s", [], lambda lv: outs[lv], 0.05)
        assert not rep.passed

    def test_two_step_jump_fails(self):
        outs = [self._mk({"C": 4.0}, {"C": 3.999}, 3.999),
                self._mk({"C": 16.0}, {"C": 4.001}, 3.999)]
        rep = _assemble("s", [], lambda lv: outs[lv], 0.05)
        assert not rep.passed

    def test_constant_without_statistic_must_match(self):
        outs = [self._mk({"C2": 1.0}, {}, 1.0),
                self._mk({"C2": 2.0}, {}, 1.0)]
        rep = _assemble("s", [], lambda lv: outs[lv], 0.05)
        assert not rep.passed

    def test_violations_at_refined_level_fail(self):
        outs = [self._mk({"C": 2.0}, {"C": 1.9}, 1.9, violated=0),
                self._mk({"C": 2.0}, {"C": 1.9}, 1.9, violated=1)]
        rep = _assemble("s", [], lambda lv: outs[lv], 0.05)
        assert not rep.passed

    def test_worst_ratio_drift_fails(self):
        outs = [self._mk({"C": 2.0}, {"C": 1.5}, 1.5),
                self._mk({"C": 2.0}, {"C": 1.5}, 1.8)]
        rep = _assemble("s", [], lambda lv: outs[lv], 0.05)
        assert not rep.passed


class TestMaximalOracle:
    # f = indicator of [-1/2, 1/2] in one dimension, alpha = 1/2

    def test_pointwise_lower_envelope(self):
        lift = RadialLift(UNIT, 1)
        for x, want in ((0.0, 1.0), (0.4, 1.0),
                        (1.0, (1.5) ** -0.5), (3.0, (3.5) ** -0.5)):
            got = frac_maximal(lift, np.array([x]), 0.5)
            assert got <= want * (1.0 + 1e-12)
            assert got == pytest.approx(want, rel=5e-4)

    def test_sup_weight_closed_form(self):
        for t in (0.3, 0.999, 1.0, 7.0, 144.0):
            want = 1.0 if t < 1.0 else t ** -0.5
            assert sup_weighted_average(UNIT, 0.5, t) == pytest.approx(
                want, rel=1e-12)

    def test_suite_reproduces_oracle_ratio(self):
        grid = np.geomspace(0.01, 1e4, 41)
        rep = verify_maximal([RadialLift(UNIT, 1)], alpha=0.5, n=1,
                             t_grid=grid)
        assert rep.passed
        assert rep.violated == 0
        assert rep.constants["C_M"] == 2.0
        assert rep.worst_ratio == pytest.approx(MAXIMAL_RATIO, rel=5e-4)

    @given(profiles(), st.sampled_from([0.2, 0.5, 0.8]))
    @settings(max_examples=40, deadline=None)
    def test_sup_weight_dominates_samples_and_decreases(self, prof, a):
        ts = np.geomspace(0.05, 2.0 * prof.support_measure, 9)
        vals = [sup_weighted_average(prof, a, float(t)) for t in ts]
        for t, v in zip(ts, vals):
            ss = np.geomspace(t * 1.0000001, 10.0 * prof.support_measure, 60)
            sampled = np.max(ss ** a * prof.maximal(ss))
            assert v >= sampled * (1.0 - 1e-9)
        assert all(x >= y - 1e-12 for x, y in zip(vals, vals[1:]))


class TestRieszBallOracle:
    def test_potential_at_origin(self):
        lift = RadialLift(UNIT, 3)
        pp = PotentialParams(alpha=0.5, n=3, psi=IDENT, quadrature=Q512)
        got = wolff(lift, np.zeros(3), pp)
        assert got == pytest.approx(RIESZ_W0, rel=1e-5)

    def test_rearranged_sampling_matches_radius(self):
        lift = RadialLift(UNIT, 3)
        pp = PotentialParams(alpha=0.5, n=3, psi=IDENT, quadrature=Q512)
        got = rearranged_potential(lift, pp, np.array([1.0]))[0]
        assert got == pytest.approx(RIESZ_W_T1, rel=1e-5)

    def test_reduction_integral_frozen_values(self):
        rp = ReductionParams(alpha=0.5, n=3, psi=IDENT)
        for t, want in RIESZ_RHS.items():
            assert rhs_rearrangement_bound(UNIT, rp, t) == pytest.approx(
                want, rel=1e-9)

    def test_ratio_band_matches_oracle(self):
        lift = RadialLift(UNIT, 3)
        pp = PotentialParams(alpha=0.5, n=3, psi=IDENT, quadrature=Q512)
        rp = ReductionParams(alpha=0.5, n=3, psi=IDENT)
        ts = np.geomspace(1e-3, 1e3, 25)
        lhs = rearranged_potential(lift, pp, ts)
        rhs = rhs_rearrangement_curve(UNIT, rp, ts)
        ratios = lhs / rhs
        assert np.max(ratios) == pytest.approx(RIESZ_RATIO_MAX, rel=1e-4)
        assert np.min(ratios) == pytest.approx(RIESZ_RATIO_MIN, rel=1e-4)
        assert np.max(ratios) < 4.0


class TestZygmundReductionOracle:
    def test_frozen_values(self):
        psi = NFunction.zygmund(2.0, 1.0, 50.0).g.inverse_fn()
        rp = ReductionParams(alpha=1.0, n=3, psi=psi)
        for t, want in ZYG_RHS.items():
            assert rhs_rearrangement_bound(TWO_STEP, rp, t) == pytest.approx(
                want, rel=1e-9)


class TestReductionCurve:
    def test_matches_pointwise_evaluations(self):
        psi = NFunction.zygmund(2.5, 1.0, 10.0).g.inverse_fn()
        rp = ReductionParams(alpha=0.6, n=3, psi=psi)
        prof = truncated_power_profile(0.7, 0.1)
        grid = np.geomspace(0.02, 50.0, 9)
        curve = rhs_rearrangement_curve(prof, rp, grid)
        pt = np.array([rhs_rearrangement_bound(prof, rp, float(t))
                       for t in grid])
        assert np.allclose(curve, pt, rtol=1e-8)

    def test_result_alignment_under_shuffle(self):
        rp = ReductionParams(alpha=0.5, n=2, psi=IDENT)
        grid = np.geomspace(0.1, 20.0, 8)
        idx = np.array([3, 0, 7, 1, 5, 2, 6, 4])
        straight = rhs_rearrangement_curve(UNIT, rp, grid)
        shuffled = rhs_rearrangement_curve(UNIT, rp, grid[idx])
        assert np.array_equal(shuffled, straight[idx])

    def test_finite_upper_limit_and_points_beyond(self):
        rp = ReductionParams(alpha=0.5, n=2, psi=IDENT, upper_limit=5.0)
        grid = np.geomspace(0.1, 20.0, 9)
        curve = rhs_rearrangement_curve(TWO_STEP, rp, grid)
        pt = np.array([rhs_rearrangement_bound(TWO_STEP, rp, float(t))
                       for t in grid])
        assert np.allclose(curve, pt, rtol=0, atol=1e-12)
        assert np.all(curve[grid >= 5.0] == 0.0)

    def test_divergent_tail_propagates_inf(self):
        # inverse of the zygmund N-function itself: small exponent 0.4,
        # and (1 + 0.4) * (0.3 - 1) = -0.98 >= -1 certifies divergence
        psi = MonotoneFn.zygmund(2.5, 1.0, 10.0).inverse_fn()
        rp = ReductionParams(alpha=0.9, n=3, psi=psi)
        grid = np.geomspace(0.1, 10.0, 5)
        curve = rhs_rearrangement_curve(UNIT, rp, grid)
        assert np.all(np.isinf(curve))

    def test_rejects_bad_grids(self):
        rp = ReductionParams(alpha=0.5, n=2, psi=IDENT)
        with pytest.raises(ValueError):
            rhs_rearrangement_curve(UNIT, rp, np.array([]))
        with pytest.raises(ValueError):
            rhs_rearrangement_curve(UNIT, rp, np.array([0.0, 1.0]))
        with pytest.raises(ValueError):
            rhs_rearrangement_curve(UNIT, rp, np.array([1.0]), inner_const=0.0)


class TestUpperSuite:
    GRID = np.geomspace(0.05, 10.0, 7)

    def _small_cases(self):
        psis = [MonotoneFn.power(1.0), MonotoneFn.power(2.0)]
        return [(psi, f) for psi in psis for f in (UNIT, TWO_STEP)]

    def test_small_suite_passes(self):
        rep = verify_upper_bound(self._small_cases(), alpha=0.5, n=2,
                                 t_grid=self.GRID)
        assert rep.passed
        assert rep.violated == 0
        assert not rep.excluded
        assert set(rep.constants) == {"C1", "C2"}
        c1 = rep.constants["C1"]
        for s in rep.samples:
            assert s["lhs"] <= c1 * s["rhs"] * (1.0 + 1e-12)

    def test_reruns_are_identical(self):
        a = verify_upper_bound(self._small_cases(), alpha=0.5, n=2,
                               t_grid=self.GRID)
        b = verify_upper_bound(self._small_cases(), alpha=0.5, n=2,
                               t_grid=self.GRID)
        assert a.to_json() == b.to_json()

    def test_serial_matches_parallel(self):
        a = verify_upper_bound(self._small_cases(), alpha=0.5, n=2,
                               t_grid=self.GRID, parallel=False)
        b = verify_upper_bound(self._small_cases(), alpha=0.5, n=2,
                               t_grid=self.GRID, parallel=True)
        assert a.to_json() == b.to_json()

    def test_divergent_case_excluded_not_crashed(self):
        # the p = 4 power scale: psi = t^(1/3) at alpha = 1, n = 3 has
        # (1 + 1/3)(1/3 - 1) = -8/9 >= -1, so the tail criterion fires
        psi = MonotoneFn.power(1.0 / 3.0)
        assert finiteness_check(psi, 1.0, 3) == "infinite"
        rep = verify_upper_bound([(psi, UNIT)], alpha=1.0, n=3,
                                 t_grid=self.GRID)
        assert rep.passed
        assert rep.excluded[0]["reason"] == "divergent tail criterion"
        assert not rep.cases

    def test_constant_monotone_in_family_size(self):
        # seeded profiles are prefix-stable, and with the inner constant
        # pinned the outer fit can only grow with more cases
        psi = MonotoneFn.power(1.0)
        small = seeded_step_profiles(2, seed=11)
        big = seeded_step_profiles(4, seed=11)
        assert all(np.array_equal(a.edges, b.edges)
                   for a, b in zip(small, big))
        kw = dict(alpha=0.5, n=2, t_grid=self.GRID, ladder=(1.0,))
        c_small = verify_upper_bound([(psi, f) for f in small],
                                     **kw).constants["C1"]
        c_big = verify_upper_bound([(psi, f) for f in big],
                                   **kw).constants["C1"]
        assert c_big >= c_small

    def test_default_families_have_twenty_cases(self):
        psis = default_psi_catalog()
        fs = default_profile_family()
        assert len(psis) == 4
        assert len(fs) == 5
        labels = {getattr(p, "family") for p in psis}
        assert "inverse" in labels


class TestSharpnessSuite:
    GRID = np.geomspace(0.05, 10.0, 7)

    def test_small_suite_passes_with_positive_constants(self):
        rep = verify_sharpness([UNIT, TWO_STEP], MonotoneFn.power(1.0),
                               alpha=0.5, n=2, t_grid=self.GRID)
        assert rep.passed
        assert rep.constants["C3"] > 0
        assert rep.violated == 0
        c3 = rep.constants["C3"]
        for s in rep.samples:
            assert c3 * s["rhs"] <= s["lhs"] * (1.0 + 1e-12)

    def test_zero_profile_degenerates_to_pass(self):
        rep = verify_sharpness([StepProfile.zero(), UNIT], IDENT,
                               alpha=0.5, n=2, t_grid=self.GRID)
        assert rep.passed
        assert any("degenerate zero cases" in x for x in rep.notes)

    def test_all_zero_family_is_vacuous(self):
        rep = verify_sharpness([StepProfile.zero()], IDENT, alpha=0.5, n=2,
                               t_grid=self.GRID)
        assert rep.passed
        assert any("all cases degenerate" in x for x in rep.notes)


class TestOrliczSuite:
    GRID = np.geomspace(0.0625, 4.0, 7)

    def test_riesz_consistent_rhs_for_quadratic_g(self):
        # G = t^2/2 has g = id, so the reported rhs is the plain
        # reduction integral: 2/sqrt(t) for t >= 1 at alpha/n = 1/4
        G = NFunction.power(2.0, coeff=0.5)
        rep = verify_orlicz_bounds([G], [UNIT], alpha=0.5, n=2,
                                   t_grid=self.GRID)
        assert rep.passed
        row = [s for s in rep.samples
               if s["label"] == "two-sided" and s["t"] == 4.0]
        assert row[0]["rhs"] == pytest.approx(1.0, rel=1e-9)

    def test_inadmissible_growth_excluded(self):
        G = NFunction.power(3.0)
        rep = verify_orlicz_bounds([G], [UNIT], alpha=1.0, n=3,
                                   t_grid=self.GRID)
        assert rep.excluded and "n/s_G" in rep.excluded[0]["reason"]
        assert rep.passed

    def test_two_sided_constants_bracket_one_case(self):
        G = NFunction.power(2.0, coeff=0.5)
        rep = verify_orlicz_bounds([G], [UNIT, TWO_STEP], alpha=0.5, n=2,
                                   t_grid=self.GRID)
        assert rep.passed
        assert rep.constants["c_W"] <= rep.constants["C_W"]
        assert rep.constants["C_53"] > 0
        assert rep.violated == 0


class TestLorentzSuite:
    def test_small_family_passes_deterministically(self):
        a = verify_lorentz_mappings(family_size=4, t_points=10)
        b = verify_lorentz_mappings(family_size=4, t_points=10)
        assert a.passed
        assert a.to_json() == b.to_json()
        assert all(v > 0 and math.isfinite(v) for v in a.constants.values())

    def test_inadmissible_alpha_rejected(self):
        with pytest.raises(ValueError):
            verify_lorentz_mappings(alpha=0.6, n=2)


class TestAppendixSuite:
    def test_default_run_passes(self):
        rep = verify_appendix()
        assert rep.passed
        assert rep.violated == 0
        assert rep.constants["C_secant"] == 1.0

    def test_inverse_equivalence_constants_small(self):
        rep = verify_appendix()
        assert rep.constants["C_inv_log"] < 4.0
        assert rep.constants["C_inv_loglog"] < 4.0


class TestComposedPotentialOracle:
    def _ball(self):
        w3 = unit_ball_volume(3)
        return RadialLift(StepProfile([0.0, w3], [1.0]), 3)

    def test_wolff_equals_newton_integral(self):
        lift = self._ball()
        pp = PotentialParams(alpha=1.0, n=3, psi=IDENT, quadrature=Q512)
        for rho in (0.0, 0.5, 1.0, 2.0):
            x = np.zeros(3)
            x[0] = rho
            want = (2.0 * np.pi * (1.0 - rho ** 2 / 3.0) if rho <= 1.0
                    else (4.0 * np.pi / 3.0) / rho)
            assert wolff(lift, x, pp) == pytest.approx(want, rel=1e-5)

    def test_composition_matches_quarter_pi_cubed(self):
        lift = self._ball()
        pp = PotentialParams(alpha=1.0, n=3, psi=IDENT, quadrature=Q512)
        x = np.zeros(3)
        got = havin_mazya(lift, x, pp)
        assert got == pytest.approx(np.pi ** 4 / 2.0, rel=3e-3)

    def test_suite_ratio_is_uniform(self):
        # both sides are Newtonian up to constants, so every sample has
        # the same ratio 2/(3 pi^2)
        rep = verify_hm_wolff([self._ball().profile], IDENT, alpha=1.0, n=3)
        assert rep.passed
        assert rep.violated == 0
        want = 2.0 / (3.0 * np.pi ** 2)
        assert rep.worst_ratio == pytest.approx(want, rel=3e-3)
        assert rep.constants["C_hm"] == 0.125
        ratios = [s["ratio"] for s in rep.samples]
        assert max(ratios) / min(ratios) == pytest.approx(1.0, abs=5e-3)
