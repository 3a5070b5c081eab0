"""One-dimensional reduction integrals and weighted Hardy inequalities.

The reduction integral int s^(a-1) psi(s^(a-1) int_0^s phi) ds is the
one-dimensional shadow of the potential: boundedness of the potential
between rearrangement-invariant spaces is equivalent to boundedness of
this integral between the representation spaces on the half line.  The
inner primitive is exact on step profiles; only the outer integral is
numeric, with an analytic constant-mass tail.
"""

import math
from dataclasses import dataclass

import numpy as np

from .monotone import MonotoneFn
from .quadrature import INF, QuadratureError, adaptive_quad, tail_psi_integral
from .rearrangement import StepProfile


@dataclass(frozen=True)
class ReductionParams:
    """Exponents, nonlinearity, and integration window of the reduction.

    lower_mode selects the lower limit of the outer integral: "t" for the
    full-line form, "t/2" for the finite-domain form.  upper_limit is the
    measure of the underlying domain (inf for the whole space).  k and c
    are the outer and inner scales carried along for modular comparisons;
    the plain operators ignore them.
    """

    alpha: float
    n: int
    psi: MonotoneFn
    lower_mode: str = "t"
    upper_limit: float = INF
    k: float = 1.0
    c: float = 1.0

    def __post_init__(self):
        if not 0 < self.alpha < self.n:
            raise ValueError("need 0 < alpha < n")
        if self.lower_mode not in ("t", "t/2"):
            raise ValueError("lower_mode must be 't' or 't/2'")
        if not self.upper_limit > 0:
            raise ValueError("upper limit must be positive")
        if self.k <= 0 or self.c <= 0:
            raise ValueError("modular scales must be positive")

    def lower(self, t):
        return 0.5 * t if self.lower_mode == "t/2" else t


def _segment_quad(prof, psi, a, lo, hi, inner, rel_tol):
    """int_lo^hi s^(a-1) psi(inner * s^(a-1) * Phi(s)) ds over a finite
    window, split at the profile edges where the primitive has kinks."""
    if hi <= lo:
        return 0.0

    def integrand(s):
        return s ** (a - 1.0) * psi(inner * s ** (a - 1.0) * prof.cumint(s))

    cuts = prof.edges[(prof.edges > lo) & (prof.edges < hi)]
    pts = np.concatenate([[lo], cuts, [hi]])
    total = 0.0
    for left, right in zip(pts[:-1], pts[1:]):
        total += adaptive_quad(integrand, float(left), float(right),
                               rel_tol=rel_tol)
    return total


def _outer_integral(prof, psi, a, lo, hi, inner, rel_tol=1e-10, tail_tol=1e-9):
    """int_lo^hi s^(a-1) psi(inner * s^(a-1) * Phi(s)) ds.

    Phi is the exact primitive of the step profile, so the integrand is
    smooth between profile edges and the quadrature is split there.
    Beyond the support Phi is the total mass and the improper tail is
    classified analytically; a certified divergent tail returns inf.
    """
    if hi <= lo:
        return 0.0
    mass = prof.total_mass
    if mass == 0.0:
        p0 = float(psi(0.0))
        if p0 == 0.0:
            return 0.0
        if math.isinf(hi):
            return INF
        return p0 * (hi ** a - lo ** a) / a

    if math.isinf(hi):
        start = max(lo, prof.support_measure)
        total = _segment_quad(prof, psi, a, lo, start, inner, rel_tol)
        val, flag = tail_psi_integral(
            psi, a - 1.0, inner * mass, a - 1.0, start,
            rel_tol=tail_tol,
            psi_small_exponent=psi.small_exponent(),
            psi_zero_plus=psi.zero_plus_limit())
        if flag == "divergent":
            return INF
        if flag != "ok":
            raise QuadratureError("reduction tail did not converge")
        return total + val
    return _segment_quad(prof, psi, a, lo, hi, inner, rel_tol)


def reduction_op(phi, params, t):
    """Outer reduction integral of phi from lower(t) to the upper limit.

    Computes int s^(a-1) psi(s^(a-1) int_0^s phi) ds with a = alpha/n.
    Returns inf when the improper tail is certified divergent.
    """
    if not isinstance(phi, StepProfile):
        raise TypeError("phi must be a StepProfile")
    if t <= 0:
        raise ValueError("t must be positive")
    a = params.alpha / float(params.n)
    return _outer_integral(phi, params.psi, a, params.lower(t),
                           params.upper_limit, 1.0)


def rhs_rearrangement_bound(f_star, params, t, inner_const=1.0):
    """int_t^L s^(a-1) psi(C s^a f**(s)) ds for a rearrangement f_star.

    Since s^a f**(s) = s^(a-1) int_0^s f*, this shares its engine with
    reduction_op; the caller supplies the inner constant C and applies
    any outer constant itself.  The lower limit is t regardless of the
    params lower_mode.
    """
    if not isinstance(f_star, StepProfile):
        raise TypeError("f_star must be a StepProfile")
    if t <= 0:
        raise ValueError("t must be positive")
    if inner_const <= 0:
        raise ValueError("inner constant must be positive")
    a = params.alpha / float(params.n)
    return _outer_integral(f_star, params.psi, a, t, params.upper_limit,
                           inner_const)


def rhs_rearrangement_curve(f_star, params, t_grid, inner_const=1.0,
                            rel_tol=1e-10, tail_tol=1e-9):
    """rhs_rearrangement_bound over a whole grid of lower limits.

    The integrals are nested, so the values are accumulated from the
    largest t downward: one full evaluation at the top of the grid, then
    one short segment per step.  This is much cheaper than independent
    evaluations when the grid is dense and agrees with them to the
    quadrature tolerance.  Returns an array aligned with t_grid.
    """
    if not isinstance(f_star, StepProfile):
        raise TypeError("f_star must be a StepProfile")
    if inner_const <= 0:
        raise ValueError("inner constant must be positive")
    ts = np.asarray(t_grid, dtype=float)
    if ts.ndim != 1 or ts.size == 0:
        raise ValueError("t_grid must be a nonempty 1-d array")
    if np.any(ts <= 0) or not np.all(np.isfinite(ts)):
        raise ValueError("t_grid entries must be positive and finite")
    a = params.alpha / float(params.n)
    L = params.upper_limit
    order = np.argsort(ts)
    asc = ts[order]
    vals = np.empty(asc.size)
    vals[-1] = _outer_integral(f_star, params.psi, a, float(asc[-1]), L,
                               inner_const, rel_tol=rel_tol,
                               tail_tol=tail_tol)
    if math.isinf(vals[-1]):
        vals[:] = INF
    else:
        for j in range(asc.size - 2, -1, -1):
            lo = float(asc[j])
            hi = min(float(asc[j + 1]), L)
            vals[j] = vals[j + 1] + _segment_quad(f_star, params.psi, a,
                                                  lo, hi, inner_const,
                                                  rel_tol)
    out = np.empty_like(vals)
    out[order] = vals
    return out


# -- classical weighted Hardy inequalities ---------------------------------------

@dataclass(frozen=True)
class HardyReport:
    lhs: float
    rhs: float
    holds: bool

    @property
    def ratio(self):
        if self.rhs == 0.0:
            return 0.0 if self.lhs == 0.0 else INF
        return self.lhs / self.rhs


def _weighted_power_sum(prof, p, q):
    # int t^p phi(t)^q dt, exact on steps; caller guarantees p > -1
    e, v = prof.edges, prof.values
    return float(np.sum(v ** q * (e[1:] ** (p + 1.0) - e[:-1] ** (p + 1.0)))
                 / (p + 1.0))


def hardy1_check(phi, p, q):
    """Averaged-primitive Hardy inequality with constant (q/(q-p-1))^q.

    lhs = int t^(p-q) (int_0^t phi)^q dt, rhs = const * int t^p phi^q dt.
    Requires q >= 1 and p < q - 1; the tail of the lhs converges exactly
    on that parameter range.
    """
    if q < 1.0:
        raise ValueError("need q >= 1")
    if not p < q - 1.0:
        raise ValueError("averaged form needs p < q - 1")
    if phi.total_mass == 0.0:
        return HardyReport(0.0, 0.0, True)
    if p <= -1.0:
        # phi(0+) > 0 makes both sides diverge at the origin
        return HardyReport(INF, INF, True)
    const = (q / (q - p - 1.0)) ** q
    rhs = const * _weighted_power_sum(phi, p, q)
    e, v = phi.edges, phi.values
    # first piece has Phi = v1 t, a pure power
    lhs = v[0] ** q * e[1] ** (p + 1.0) / (p + 1.0)

    def integrand(t):
        return t ** (p - q) * phi.cumint(t) ** q

    for k in range(1, v.size):
        lhs += adaptive_quad(integrand, float(e[k]), float(e[k + 1]),
                             rel_tol=1e-12)
    mass = phi.total_mass
    lhs += mass ** q * e[-1] ** (p - q + 1.0) / (q - p - 1.0)
    return HardyReport(lhs, rhs, bool(lhs <= rhs * (1.0 + 1e-9)))


def hardy2_check(phi, p, q):
    """Tail-primitive Hardy inequality with constant (q/(p+1-q))^q.

    lhs = int t^(p-q) (int_t^inf phi)^q dt, rhs = const * int t^p phi^q dt.
    Requires q >= 1 and p > q - 1, which makes the origin singularity of
    the lhs integrable.
    """
    if q < 1.0:
        raise ValueError("need q >= 1")
    if not p > q - 1.0:
        raise ValueError("tail form needs p > q - 1")
    if phi.total_mass == 0.0:
        return HardyReport(0.0, 0.0, True)
    const = (q / (p + 1.0 - q)) ** q
    rhs = const * _weighted_power_sum(phi, p, q)
    mass = phi.total_mass

    def integrand(t):
        return t ** (p - q) * np.maximum(mass - phi.cumint(t), 0.0) ** q

    e = phi.edges
    lhs = 0.0
    for k in range(e.size - 1):
        lhs += adaptive_quad(integrand, float(e[k]), float(e[k + 1]),
                             rel_tol=1e-11)
    return HardyReport(lhs, rhs, bool(lhs <= rhs * (1.0 + 1e-9)))


# -- default test family ----------------------------------------------------------

@dataclass(frozen=True)
class PhiMember:
    label: str
    profile: StepProfile


def default_phi_family(size=20, seed=7):
    """Deterministic family of step profiles for property sweeps.

    Cycles through three shapes: log-discretized power cutoffs (the
    decreasing rearrangement of s^(-a) restricted to [eps, 1]), random
    steps, and mixtures of geometrically nested indicators.
    """
    rng = np.random.default_rng(seed)
    out = []
    for i in range(size):
        kind = ("powercut", "steps", "geomix")[i % 3]
        if kind == "powercut":
            expo = rng.uniform(0.2, 1.5)
            eps = 10.0 ** rng.uniform(-3.0, -1.0)
            s = np.geomspace(eps, 1.0, 41)
            mids = np.sqrt(s[1:] * s[:-1])
            edges = np.concatenate([[0.0], np.cumsum(np.diff(s))])
            prof = StepProfile(edges, mids ** (-expo))
            label = "powercut a=%.3f eps=%.2e" % (expo, eps)
        elif kind == "steps":
            m = int(rng.integers(3, 10))
            widths = rng.lognormal(0.0, 0.8, m)
            vals = np.cumsum(rng.exponential(1.0, m)[::-1])[::-1]
            prof = StepProfile(np.concatenate([[0.0], np.cumsum(widths)]),
                               vals)
            label = "steps m=%d" % m
        else:
            m = int(rng.integers(4, 9))
            width = rng.uniform(0.5, 2.0)
            ratio = rng.uniform(0.3, 0.7)
            coeff = rng.uniform(0.2, 2.0, m)
            tops = width * ratio ** np.arange(m)
            # value on each band is the sum of the indicators covering it
            pref = np.cumsum(coeff)
            prof = StepProfile(np.concatenate([[0.0], tops[::-1]]),
                               pref[::-1])
            label = "geomix m=%d r=%.2f" % (m, ratio)
        out.append(PhiMember(label, prof))
    return out
