"""Reduction operator and Hardy inequality checks.

Frozen constants come from tests/oracles/oracle_hardy.py (scipy.quad on
the defining integrals).  The consistency tests at the bottom tie the
one-dimensional reduction to the potential on radially decreasing
inputs: pointwise envelope, Lorentz-norm mapping, and modular mapping.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wolfflab.hardy import (
    HardyReport,
    ReductionParams,
    default_phi_family,
    hardy1_check,
    hardy2_check,
    reduction_op,
    rhs_rearrangement_bound,
)
from wolfflab.monotone import MonotoneFn
from wolfflab.norms import (
    LorentzParams,
    ModularFunctional,
    lorentz_norm,
    modular,
)
from wolfflab.potentials import PotentialParams, wolff
from wolfflab.quadrature import INF, tail_psi_integral
from wolfflab.rearrangement import RadialLift, StepProfile, unit_ball_volume

# oracle_hardy.py outputs
RED_UNIT_T02 = 3.105572809000
POWER_TWO_STEP = 10.385578289398
LLOGL_TWO_STEP = 13.001132679752

UNIT = StepProfile([0.0, 1.0], [1.0])
TWO_STEP = StepProfile([0.0, 0.5, 2.0], [3.0, 1.0])
IDENT = MonotoneFn.identity()


@st.composite
def profiles(draw):
    m = draw(st.integers(1, 5))
    widths = draw(st.lists(st.floats(0.1, 3.0), min_size=m, max_size=m))
    drops = draw(st.lists(st.floats(0.05, 2.0), min_size=m, max_size=m))
    vals = np.cumsum(np.asarray(drops)[::-1])[::-1]
    edges = np.concatenate([[0.0], np.cumsum(widths)])
    return StepProfile(edges, vals)


class TestReductionOp:
    def test_unit_interval_closed_form(self):
        pars = ReductionParams(alpha=0.5, n=2, psi=IDENT)
        got = reduction_op(UNIT, pars, 1.0)
        assert got == pytest.approx(2.0, rel=1e-9)

    def test_unit_interval_small_t_limit(self):
        # value is 4 - 2 sqrt(t) for t <= 1
        pars = ReductionParams(alpha=0.5, n=2, psi=IDENT)
        got = reduction_op(UNIT, pars, 1e-10)
        assert got == pytest.approx(4.0 - 2e-5, rel=1e-8)

    def test_unit_interval_frozen_midpoint(self):
        pars = ReductionParams(alpha=0.5, n=2, psi=IDENT)
        got = reduction_op(UNIT, pars, 0.2)
        assert got == pytest.approx(RED_UNIT_T02, rel=1e-9)

    def test_half_lower_mode_shifts_the_window(self):
        full = ReductionParams(alpha=0.5, n=2, psi=IDENT)
        half = ReductionParams(alpha=0.5, n=2, psi=IDENT, lower_mode="t/2")
        got = reduction_op(UNIT, half, 0.4)
        want = reduction_op(UNIT, full, 0.2)
        assert got == pytest.approx(want, rel=1e-10)
        assert got == pytest.approx(RED_UNIT_T02, rel=1e-9)

    def test_finite_window_two_step_frozen(self):
        pars = ReductionParams(alpha=1.2, n=3, psi=MonotoneFn.power(2.0),
                               lower_mode="t/2", upper_limit=4.0)
        got = reduction_op(TWO_STEP, pars, 0.5)
        assert got == pytest.approx(POWER_TWO_STEP, rel=1e-9)

    def test_zero_profile_vanishing_psi(self):
        pars = ReductionParams(alpha=0.5, n=2, psi=IDENT)
        assert reduction_op(StepProfile.zero(), pars, 1.0) == 0.0

    def test_zero_profile_positive_psi_finite_window(self):
        psi = MonotoneFn.table([0.0, 1.0], [0.5, 2.0])
        pars = ReductionParams(alpha=1.0, n=2, psi=psi, upper_limit=3.0)
        got = reduction_op(StepProfile.zero(), pars, 0.25)
        want = 0.5 * (math.sqrt(3.0) - math.sqrt(0.25)) / 0.5
        assert got == pytest.approx(want, rel=1e-12)

    def test_zero_profile_positive_psi_infinite_window(self):
        psi = MonotoneFn.table([0.0, 1.0], [0.5, 2.0])
        pars = ReductionParams(alpha=1.0, n=2, psi=psi)
        assert math.isinf(reduction_op(StepProfile.zero(), pars, 0.25))

    def test_divergent_tail_is_infinite(self):
        # psi = sqrt: tail exponent (1 + 1/2)(a - 1) = -3/4 >= -1
        pars = ReductionParams(alpha=1.0, n=2, psi=MonotoneFn.power(0.5))
        got = reduction_op(UNIT, pars, 1.0)
        assert math.isinf(got) and not math.isnan(got)

    def test_window_past_upper_limit_is_empty(self):
        pars = ReductionParams(alpha=0.5, n=2, psi=IDENT, upper_limit=2.0)
        assert reduction_op(UNIT, pars, 3.0) == 0.0

    def test_validation(self):
        pars = ReductionParams(alpha=0.5, n=2, psi=IDENT)
        with pytest.raises(ValueError):
            reduction_op(UNIT, pars, 0.0)
        with pytest.raises(TypeError):
            reduction_op(np.ones(3), pars, 1.0)
        with pytest.raises(ValueError):
            ReductionParams(alpha=2.5, n=2, psi=IDENT)
        with pytest.raises(ValueError):
            ReductionParams(alpha=0.5, n=2, psi=IDENT, lower_mode="2t")
        with pytest.raises(ValueError):
            ReductionParams(alpha=0.5, n=2, psi=IDENT, upper_limit=0.0)
        with pytest.raises(ValueError):
            ReductionParams(alpha=0.5, n=2, psi=IDENT, k=0.0)

    @settings(max_examples=25, deadline=None)
    @given(profiles(), st.floats(0.1, 4.0), st.floats(0.05, 1.5))
    def test_monotone_in_phi(self, prof, t, bump):
        pars = ReductionParams(alpha=0.5, n=2, psi=MonotoneFn.power(1.3))
        bigger = StepProfile(prof.edges, prof.values + bump)
        lo = reduction_op(prof, pars, t)
        hi = reduction_op(bigger, pars, t)
        assert lo <= hi * (1.0 + 1e-9) + 1e-12


class TestRhsRearrangementBound:
    def test_unit_example(self):
        pars = ReductionParams(alpha=1.0, n=3, psi=IDENT)
        got = rhs_rearrangement_bound(UNIT, pars, 1.0)
        assert got == pytest.approx(3.0, rel=1e-9)

    def test_identity_with_reduction_op(self):
        # s^a f**(s) = s^(a-1) int_0^s f*, so C=1 and psi=id coincide
        pars = ReductionParams(alpha=0.8, n=2, psi=IDENT)
        for mem in default_phi_family()[:4]:
            for t in (0.3, 1.7):
                lhs = rhs_rearrangement_bound(mem.profile, pars, t)
                rhs = reduction_op(mem.profile, pars, t)
                assert lhs == pytest.approx(rhs, rel=1e-10)

    def test_inner_constant_scales_linearly_for_identity(self):
        pars = ReductionParams(alpha=1.0, n=3, psi=IDENT)
        one = rhs_rearrangement_bound(TWO_STEP, pars, 0.7)
        two = rhs_rearrangement_bound(TWO_STEP, pars, 0.7, inner_const=2.0)
        assert two == pytest.approx(2.0 * one, rel=1e-10)

    def test_two_step_llogl_frozen(self):
        pars = ReductionParams(alpha=1.2, n=3,
                               psi=MonotoneFn.zygmund(1.0, 1.0, math.e))
        got = rhs_rearrangement_bound(TWO_STEP, pars, 0.5, inner_const=0.7)
        assert got == pytest.approx(LLOGL_TWO_STEP, rel=1e-8)

    def test_window_past_support_matches_constant_mass_tail(self):
        psi = MonotoneFn.power(2.0)
        pars = ReductionParams(alpha=1.0, n=3, psi=psi)
        t = 5.0   # beyond the support of TWO_STEP
        got = rhs_rearrangement_bound(TWO_STEP, pars, t, inner_const=0.9)
        a = 1.0 / 3.0
        want, flag = tail_psi_integral(
            psi, a - 1.0, 0.9 * TWO_STEP.total_mass, a - 1.0, t,
            psi_small_exponent=psi.small_exponent(),
            psi_zero_plus=psi.zero_plus_limit())
        assert flag == "ok"
        assert got == pytest.approx(want, rel=1e-9)

    def test_validation(self):
        pars = ReductionParams(alpha=1.0, n=3, psi=IDENT)
        with pytest.raises(ValueError):
            rhs_rearrangement_bound(UNIT, pars, -1.0)
        with pytest.raises(ValueError):
            rhs_rearrangement_bound(UNIT, pars, 1.0, inner_const=0.0)
        with pytest.raises(TypeError):
            rhs_rearrangement_bound("profile", pars, 1.0)


class TestHardy1:
    def test_unit_witness(self):
        rep = hardy1_check(UNIT, 0.0, 2.0)
        assert rep.lhs == pytest.approx(2.0, rel=1e-12)
        assert rep.rhs == pytest.approx(4.0, rel=1e-12)
        assert rep.holds
        assert rep.ratio == pytest.approx(0.5, rel=1e-12)

    def test_zero_profile(self):
        rep = hardy1_check(StepProfile.zero(), 0.0, 2.0)
        assert rep == HardyReport(0.0, 0.0, True)
        assert rep.ratio == 0.0

    def test_parameter_region_rejected(self):
        with pytest.raises(ValueError):
            hardy1_check(UNIT, 1.0, 2.0)    # p >= q - 1
        with pytest.raises(ValueError):
            hardy1_check(UNIT, 1.5, 2.5)    # boundary p = q - 1
        with pytest.raises(ValueError):
            hardy1_check(UNIT, -0.5, 0.9)   # q < 1

    def test_divergent_at_origin_flags_both_sides(self):
        rep = hardy1_check(UNIT, -1.2, 1.0)
        assert math.isinf(rep.lhs) and math.isinf(rep.rhs) and rep.holds

    @pytest.mark.parametrize("p,q", [(0.6, 2.3), (-0.5, 1.2), (0.0, 2.0)])
    def test_family_sweep(self, p, q):
        for mem in default_phi_family():
            rep = hardy1_check(mem.profile, p, q)
            assert rep.holds, "%s at p=%g q=%g: %g > %g" % (
                mem.label, p, q, rep.lhs, rep.rhs)

    def test_hundred_random_draws_hold(self):
        rng = np.random.default_rng(41)
        for _ in range(100):
            m = int(rng.integers(2, 7))
            widths = rng.lognormal(0.0, 0.7, m)
            vals = np.sort(rng.exponential(1.0, m))[::-1]
            prof = StepProfile(np.concatenate([[0.0], np.cumsum(widths)]),
                               vals)
            q = rng.uniform(1.0, 3.0)
            p = rng.uniform(-0.9, q - 1.1)
            rep = hardy1_check(prof, p, q)
            assert rep.holds


class TestHardy2:
    def test_unit_witness_is_equality(self):
        rep = hardy2_check(UNIT, 1.0, 1.0)
        assert rep.lhs == pytest.approx(0.5, rel=1e-9)
        assert rep.rhs == pytest.approx(0.5, rel=1e-12)
        assert rep.holds

    def test_zero_profile(self):
        assert hardy2_check(StepProfile.zero(), 1.0, 1.0) == HardyReport(
            0.0, 0.0, True)

    def test_parameter_region_rejected(self):
        with pytest.raises(ValueError):
            hardy2_check(UNIT, 0.5, 2.0)    # p <= q - 1
        with pytest.raises(ValueError):
            hardy2_check(UNIT, 1.0, 2.0)    # boundary
        with pytest.raises(ValueError):
            hardy2_check(UNIT, 1.0, 0.8)    # q < 1

    @pytest.mark.parametrize("p,q", [(1.1, 1.4), (2.5, 2.0), (0.5, 1.0)])
    def test_family_sweep(self, p, q):
        for mem in default_phi_family():
            rep = hardy2_check(mem.profile, p, q)
            assert rep.holds, "%s at p=%g q=%g: %g > %g" % (
                mem.label, p, q, rep.lhs, rep.rhs)

    def test_hundred_random_draws_hold(self):
        rng = np.random.default_rng(42)
        for _ in range(100):
            m = int(rng.integers(2, 7))
            widths = rng.lognormal(0.0, 0.7, m)
            vals = np.sort(rng.exponential(1.0, m))[::-1]
            prof = StepProfile(np.concatenate([[0.0], np.cumsum(widths)]),
                               vals)
            q = rng.uniform(1.0, 3.0)
            p = rng.uniform(q - 0.9, q + 2.0)
            rep = hardy2_check(prof, p, q)
            assert rep.holds


class TestPhiFamily:
    def test_reproducible_and_sized(self):
        fam1 = default_phi_family()
        fam2 = default_phi_family()
        assert len(fam1) == 20
        for a, b in zip(fam1, fam2):
            assert a.label == b.label
            assert a.profile == b.profile

    def test_covers_three_kinds(self):
        labels = " ".join(m.label for m in default_phi_family())
        for kind in ("powercut", "steps", "geomix"):
            assert kind in labels

    def test_members_are_nontrivial(self):
        for mem in default_phi_family():
            assert mem.profile.total_mass > 0.0
            assert mem.profile.support_measure > 0.0


# -- consistency between the reduction and the potential --------------------------
#
# For psi = id, alpha = 1/2, n = 2 and radially decreasing inputs, the
# potential evaluated at radius r(t) = (t/omega_n)^{1/2} equals the
# decreasing rearrangement of the potential at measure t.  The sampled
# ratio against the reduction integral is the empirical envelope
# constant; norm and modular mappings must then hold with that constant
# uniformly over the family.

ALPHA_MAP, N_MAP = 0.5, 2
RPARS_MAP = ReductionParams(alpha=ALPHA_MAP, n=N_MAP, psi=IDENT, k=2.0)
PPARS_MAP = PotentialParams(alpha=ALPHA_MAP, n=N_MAP, psi=IDENT)


@pytest.fixture(scope="module")
def mapping_data():
    wn = unit_ball_volume(N_MAP)
    ts = np.geomspace(1e-6, 1e6, 97)
    rows = []
    for mem in default_phi_family()[:6]:
        prof = mem.profile
        assert prof.support_measure < ts[-1]
        g = np.array([reduction_op(prof, RPARS_MAP, float(t)) for t in ts])
        lift = RadialLift(prof, N_MAP)
        radii = (ts / wn) ** (1.0 / N_MAP)
        w = np.array([wolff(lift, np.array([r, 0.0]), PPARS_MAP)
                      for r in radii])
        w0 = wolff(lift, np.zeros(N_MAP), PPARS_MAP)
        rows.append((mem.label, prof, g, w, w0))
    kappa = max(float(np.max(w / g)) for (_, _, g, w, _) in rows)
    return ts, rows, kappa


def _power_weight_brackets(ts, vals, c_exp, q, top_val, tail_coeff):
    """Bracket int_0^inf s^(c-1) h(s)^q ds for decreasing samples h.

    top_val bounds h near 0; beyond the window h <= tail_coeff / sqrt(s),
    which integrates in closed form.
    """
    pw = (ts[1:] ** c_exp - ts[:-1] ** c_exp) / c_exp
    body_lo = float(np.sum(pw * vals[1:] ** q))
    body_hi = float(np.sum(pw * vals[:-1] ** q))
    head_lo = vals[0] ** q * ts[0] ** c_exp / c_exp
    head_hi = top_val ** q * ts[0] ** c_exp / c_exp
    e = c_exp - q / 2.0
    assert e < 0.0
    tail_hi = tail_coeff ** q * ts[-1] ** e / (-e)
    return head_lo + body_lo, head_hi + body_hi + tail_hi


class TestReductionPotentialConsistency:
    def test_pointwise_envelope_is_uniform(self, mapping_data):
        ts, rows, kappa = mapping_data
        lo = min(float(np.min(w / g)) for (_, _, g, w, _) in rows)
        assert 0.0 < lo <= kappa < INF
        # both tails approach W/g -> sqrt(pi)/2 =~ 0.886
        assert kappa / lo < 5.0
        assert lo == pytest.approx(math.sqrt(math.pi) / 2.0, rel=0.02)

    def test_lorentz_pair_mapping(self, mapping_data):
        # Xbar = L^{4/3}, Ybar = Lambda^{4, 4/3}
        ts, rows, kappa = mapping_data
        q = 4.0 / 3.0
        c_exp = q / 4.0
        xpars = LorentzParams(4.0 / 3.0, 4.0 / 3.0)
        one_d = []
        for (label, prof, g, w, w0) in rows:
            x = lorentz_norm(prof, xpars)
            top = g[0] + 2.0 * prof.values[0] * math.sqrt(ts[0])
            g_lo, g_hi = _power_weight_brackets(
                ts, g, c_exp, q, top, 2.0 * prof.total_mass)
            assert g_hi / g_lo < 1.12
            one_d.append((label, x, g_hi ** (1.0 / q)))
        c1 = max(y / x for (_, x, y) in one_d)
        assert np.isfinite(c1)
        for (label, prof, g, w, w0), (_, x, _) in zip(rows, one_d):
            w_lo, w_hi = _power_weight_brackets(
                ts, w, c_exp, q, w0,
                2.0 * prof.total_mass * math.sqrt(math.pi))
            assert w_hi / w_lo < 1.12
            ratio = w_hi ** (1.0 / q) / x
            assert ratio <= kappa * c1 * 1.15, (
                "%s: potential norm ratio %.4f exceeds envelope %.4f"
                % (label, ratio, kappa * c1))

    def test_modular_mapping(self, mapping_data):
        ts, rows, kappa = mapping_data
        square = MonotoneFn.power(2.0)
        t_x = ModularFunctional(square, 0.5, 0.0, side="X")
        k = RPARS_MAP.k
        pw = 2.0 * (np.sqrt(ts[1:]) - np.sqrt(ts[:-1]))
        for (label, prof, g, w, w0) in rows:
            base = modular(t_x, prof)
            assert 0.0 < base < INF
            top = g[0] + 2.0 * prof.values[0] * math.sqrt(ts[0])
            g_hi = (float(np.sum(pw * (k * g[:-1]) ** 2))
                    + 2.0 * math.sqrt(ts[0]) * (k * top) ** 2
                    + (2.0 * k * prof.total_mass) ** 2
                    * 2.0 / math.sqrt(ts[-1]))
            w_hi = (float(np.sum(pw * (k * w[:-1]) ** 2))
                    + 2.0 * math.sqrt(ts[0]) * (k * w0) ** 2
                    + (2.0 * k * prof.total_mass * math.sqrt(math.pi)) ** 2
                    * 2.0 / math.sqrt(ts[-1]))
            c_1d = math.sqrt(g_hi / base)
            c_nd = math.sqrt(w_hi / base)
            assert c_nd <= kappa * c_1d * 1.15, (
                "%s: modular ratio %.4f exceeds envelope %.4f"
                % (label, c_nd, kappa * c_1d))
