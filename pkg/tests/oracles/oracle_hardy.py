"""Independent oracle for the reduction operator and Hardy checkers.

Every value here is computed with scipy.integrate.quad straight from the
defining integrals, with no package code involved.  Frozen outputs are
pasted into tests/test_hardy.py.

Run:  python3 tests/oracles/oracle_hardy.py
"""

import numpy as np
from scipy.integrate import quad


def phi_unit(s):
    """Indicator of [0, 1]."""
    return 1.0 if s <= 1.0 else 0.0


def primitive_unit(s):
    return min(s, 1.0)


def reduction_unit_interval(t, a):
    """int_t^inf s^(a-1) * (s^(a-1) * Phi(s)) ds for phi = 1_[0,1], psi = id."""
    body = 0.0
    if t < 1.0:
        body, _ = quad(lambda s: s ** (a - 1.0) * s ** (a - 1.0) * s, t, 1.0)
    lo = max(t, 1.0)
    # beyond the support the primitive is 1, closed tail: s^(2a-2)
    tail = lo ** (2.0 * a - 1.0) / (1.0 - 2.0 * a)
    return body + tail


def rhs_unit_example():
    """f* = 1_[0,1), alpha=1, n=3, psi=id, t=1: integrand s^(-2/3) * s^(1/3) f**."""
    a = 1.0 / 3.0

    def fstar2(s):
        return 1.0 if s <= 1.0 else 1.0 / s

    val, _ = quad(lambda s: s ** (a - 1.0) * s ** a * fstar2(s), 1.0, 200.0)
    tail = 3.0 * 200.0 ** (-1.0 / 3.0)   # int s^(-4/3) beyond the window
    return val + tail


def hardy1_unit():
    lhs1, _ = quad(lambda t: (primitive_unit(t) / t) ** 2, 0.0, 1.0)
    lhs2, _ = quad(lambda t: (1.0 / t) ** 2, 1.0, np.inf)
    rhs = (2.0 / (2.0 - 0.0 - 1.0)) ** 2 * 1.0
    return lhs1 + lhs2, rhs


def hardy2_unit():
    lhs, _ = quad(lambda t: t ** (1.0 - 1.0) * (1.0 - primitive_unit(t)), 0.0, 1.0)
    rhs_int, _ = quad(lambda t: t ** 1.0, 0.0, 1.0)
    rhs = (1.0 / (1.0 + 1.0 - 1.0)) ** 1 * rhs_int
    return lhs, rhs


# two-step profile used for the frozen nontrivial cases:
# 3 on [0, 1/2), 1 on [1/2, 2), zero beyond.
def two_step_primitive(s):
    if s < 0.5:
        return 3.0 * s
    if s < 2.0:
        return 1.0 + s
    return 3.0


def frozen_power_case():
    """alpha=1.2, n=3 (a=0.4), psi(u)=u^2, lower t/2 with t=0.5, L=4."""
    a = 0.4

    def integrand(s):
        return s ** (a - 1.0) * (s ** (a - 1.0) * two_step_primitive(s)) ** 2

    val, err = quad(integrand, 0.25, 4.0, points=[0.5, 2.0], limit=200)
    return val, err


def frozen_llogl_case():
    """alpha=1.2, n=3, psi(u)=u*log(e+u), inner constant 0.7, t=0.5, L=inf."""
    a = 0.4

    def psi(u):
        return u * np.log(np.e + u)

    def integrand(s):
        return s ** (a - 1.0) * psi(0.7 * s ** (a - 1.0) * two_step_primitive(s))

    body, _ = quad(integrand, 0.5, 2.0, points=[2.0], limit=200)
    tail, _ = quad(integrand, 2.0, np.inf, limit=400)
    return body + tail


def sweep_hardy(seed=3, draws=60):
    """Random step profiles, scipy both sides; confirms the constants."""
    rng = np.random.default_rng(seed)
    worst1 = worst2 = 0.0
    for _ in range(draws):
        m = rng.integers(2, 7)
        widths = rng.lognormal(0.0, 0.7, m)
        vals = np.sort(rng.exponential(1.0, m))[::-1]
        edges = np.concatenate([[0.0], np.cumsum(widths)])

        def phi(t):
            idx = np.searchsorted(edges, t, side="right") - 1
            return vals[idx] if 0 <= idx < m else 0.0

        def prim(t):
            total = 0.0
            for k in range(m):
                total += vals[k] * max(min(t, edges[k + 1]) - edges[k], 0.0)
            return total

        mass = prim(edges[-1])

        # hardy1 at q=2.3, p=0.6 (p < q-1)
        p, q = 0.6, 2.3
        lhs, _ = quad(lambda t: t ** (p - q) * prim(t) ** q, 0.0, edges[-1],
                      points=list(edges[1:-1]), limit=300)
        lhs += mass ** q * edges[-1] ** (p - q + 1.0) / (q - p - 1.0)
        rhs_int, _ = quad(lambda t: t ** p * phi(t) ** q, 0.0, edges[-1],
                          points=list(edges[1:-1]), limit=300)
        rhs = (q / (q - p - 1.0)) ** q * rhs_int
        worst1 = max(worst1, lhs / rhs)

        # hardy2 at q=1.4, p=1.1 (p > q-1)
        p, q = 1.1, 1.4
        lhs, _ = quad(lambda t: t ** (p - q) * max(mass - prim(t), 0.0) ** q,
                      0.0, edges[-1], points=list(edges[1:-1]), limit=300)
        rhs_int, _ = quad(lambda t: t ** p * phi(t) ** q, 0.0, edges[-1],
                          points=list(edges[1:-1]), limit=300)
        rhs = (q / (p + 1.0 - q)) ** q * rhs_int
        worst2 = max(worst2, lhs / rhs)
    return worst1, worst2


def main():
    a = 0.25   # alpha = 1/2, n = 2
    print("reduction, phi=1_[0,1], psi=id, a=1/4:")
    print("  t=1      -> %.12f   (expect 2)" % reduction_unit_interval(1.0, a))
    print("  t=1e-10  -> %.12f   (expect -> 4)" % reduction_unit_interval(1e-10, a))
    print("  t=0.2    -> %.12f" % reduction_unit_interval(0.2, a))
    print("rhs bound, f*=1_[0,1), alpha=1, n=3, t=1:")
    print("  -> %.12f   (expect 3)" % rhs_unit_example())
    l, r = hardy1_unit()
    print("hardy1 q=2 p=0 unit: lhs=%.12f rhs=%.12f" % (l, r))
    l, r = hardy2_unit()
    print("hardy2 q=1 p=1 unit: lhs=%.12f rhs=%.12f" % (l, r))
    val, err = frozen_power_case()
    print("frozen two-step power case: %.12f  (quad err %.2e)" % (val, err))
    print("frozen two-step llogl case: %.12f" % frozen_llogl_case())
    w1, w2 = sweep_hardy()
    print("hardy sweep worst ratios: hardy1 %.6f  hardy2 %.6f" % (w1, w2))


if __name__ == "__main__":
    main()
