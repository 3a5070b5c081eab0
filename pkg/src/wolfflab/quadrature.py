"""Adaptive quadrature and improper-integral helpers.

Every integrator here calls the integrand with a numpy array of abscissae,
never with scalars.  The hot integrands of this package (compositions with
a numerically inverted monotone function) amortize their own inner
bisection loops across whole node batches, so scalar quadrature routines
would dominate the runtime.

Infinity is a first-class result: improper integrals that are certified
divergent return ``inf`` together with a flag, they never raise.
"""

import numpy as np

INF = float("inf")


class QuadratureError(RuntimeError):
    """Integration failed structurally (NaN integrand, budget exhausted)."""


# 15/7-point Gauss-Legendre pair; the gap between the two estimates is the
# panel error indicator, in the spirit of Gauss-Kronrod refinement.
_XH, _WH = np.polynomial.legendre.leggauss(15)
_XL, _WL = np.polynomial.legendre.leggauss(7)
_NODES = np.concatenate([_XH, _XL])


def _panel(fn, a, b):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    vals = np.asarray(fn(mid + half * _NODES), dtype=float)
    if np.isnan(vals).any():
        raise QuadratureError("integrand returned NaN on [%g, %g]" % (a, b))
    hi = half * float(np.dot(_WH, vals[:15]))
    lo = half * float(np.dot(_WL, vals[15:]))
    return hi, abs(hi - lo)


def adaptive_quad(fn, a, b, rel_tol=1e-9, abs_tol=0.0, max_panels=4000):
    """Integrate fn over the finite interval [a, b] by panel bisection.

    fn must accept an ndarray and return values elementwise.  Interior
    Gauss nodes mean integrable endpoint singularities are fine.  The
    panel with the worst error indicator is split until the summed
    indicator drops below max(rel_tol * |integral|, abs_tol).
    """
    if not b > a:
        return 0.0
    panels = [(a, b, *_panel(fn, a, b))]
    while len(panels) < max_panels:
        total = sum(p[2] for p in panels)
        err = sum(p[3] for p in panels)
        if err <= max(rel_tol * abs(total), abs_tol):
            return total
        worst = max(range(len(panels)), key=lambda i: panels[i][3])
        pa, pb, _, _ = panels.pop(worst)
        pm = 0.5 * (pa + pb)
        panels.append((pa, pm, *_panel(fn, pa, pm)))
        panels.append((pm, pb, *_panel(fn, pm, pb)))
    total = sum(p[2] for p in panels)
    err = sum(p[3] for p in panels)
    # A last 1e-6 escape hatch: endpoint singularities with slow bisection
    # rates can stall just above a very tight tolerance.
    if err <= 1e-6 * max(abs(total), 1e-300):
        return total
    raise QuadratureError(
        "panel budget exhausted on [%g, %g]: err %.3g, value %.6g"
        % (a, b, err, total)
    )


def log_midpoint(fn, a, b, per_decade=64):
    """Composite midpoint rule on log-spaced nodes over [a, b], 0 < a < b.

    Returns the node radii alongside the integral so callers can reuse the
    evaluations.  The rule is midpoint in u = log r, i.e.
    int fn(r) dr = int fn(e^u) e^u du.
    """
    if not 0 < a < b:
        raise ValueError("log_midpoint needs 0 < a < b")
    decades = np.log10(b / a)
    count = max(int(np.ceil(per_decade * decades)), 4)
    du = (np.log(b) - np.log(a)) / count
    u = np.log(a) + (np.arange(count) + 0.5) * du
    r = np.exp(u)
    vals = np.asarray(fn(r), dtype=float)
    if np.isnan(vals).any():
        raise QuadratureError("integrand returned NaN on log grid")
    return float(np.sum(vals * r) * du), r


def geometric_tail(fn, start, rel_tol=1e-9, growth=2.0, max_panels=400):
    """Integrate fn over [start, inf) by geometric panels.

    Returns (value, converged).  Convergence requires the running panel
    contributions to decay geometrically; the remainder of the geometric
    trend is added to the sum.  Non-convergence within the panel budget
    reports converged=False with the partial sum.
    """
    total = 0.0
    a = start
    prev = None
    for _ in range(max_panels):
        b = a * growth
        val, _ = _panel(fn, a, b)
        total += val
        if prev is not None and abs(val) <= rel_tol * max(abs(total), 1e-300):
            ratio = abs(val) / max(abs(prev), 1e-300)
            if ratio < 0.95:
                total += val * ratio / (1.0 - ratio)
                return total, True
        prev = val
        a = b
    return total, False


def local_exponent(fn, x, factor=8.0):
    """Estimate the local power-law exponent of fn near x.

    Returns (exponent, stable).  stable is False when two probe scales
    disagree by more than 1e-3 or a probe value vanishes.
    """
    xs = np.array([x, x * factor, x * factor ** 2], dtype=float)
    vals = np.asarray(fn(xs), dtype=float)
    if np.any(vals <= 0.0) or np.isnan(vals).any():
        return 0.0, False
    e1 = np.log(vals[1] / vals[0]) / np.log(factor)
    e2 = np.log(vals[2] / vals[1]) / np.log(factor)
    return float(0.5 * (e1 + e2)), bool(abs(e1 - e2) < 1e-3)


def tail_psi_integral(psi, e0, c1, e1, start, rel_tol=1e-9,
                      psi_small_exponent=None, psi_zero_plus=None):
    """Evaluate int_start^inf s^e0 psi(c1 * s^e1) ds with e1 < 0.

    This is the constant-mass tail shared by the potentials and the
    reduction operator.  psi is a vectorized non-decreasing function, so
    the argument c1 * s^e1 decays and the integrand behaves like a power
    of s at infinity.

    psi_small_exponent: exact exponent rho with psi(u) ~ const * u^rho as
    u -> 0+, when the caller knows it (None triggers numeric probing).
    psi_zero_plus: the right limit of psi at 0, likewise.

    Returns (value, flag) with flag in {'ok', 'divergent', 'unstable'};
    value is inf for the latter two.
    """
    if e1 >= 0:
        raise ValueError("tail_psi_integral expects a decaying argument, e1 < 0")
    if start <= 0:
        raise ValueError("tail starts at a positive abscissa")

    # pure powers admit a closed tail; this also covers slowly convergent
    # exponents just below -1 that geometric summation cannot reach
    fam = getattr(psi, "family", None)
    if fam in ("identity", "power"):
        if fam == "identity":
            coeff, p = 1.0, 1.0
        else:
            coeff = psi.params["coeff"]
            p = psi.params["exponent"]
        if coeff == 0.0:
            return 0.0, "ok"
        if p > 0:
            eff = e0 + p * e1
            if eff >= -1.0:
                return INF, "divergent"
            return (coeff * c1 ** p * start ** (eff + 1.0) / -(eff + 1.0),
                    "ok")

    def integrand(s):
        return s ** e0 * psi(c1 * s ** e1)

    if psi_zero_plus is None:
        if psi_small_exponent is not None and psi_small_exponent > 0:
            # a positive vanishing exponent pins the limit at zero
            psi_zero_plus = 0.0
        else:
            probe = np.asarray(psi(np.array([1e-12, 1e-9, 1e-6])), dtype=float)
            # a positive limit shows up as a flat probe; positive but
            # decaying samples mean the limit is still zero
            if probe[0] > 0 and probe[2] <= 2.0 * probe[0]:
                psi_zero_plus = float(probe[0])
            else:
                psi_zero_plus = 0.0

    if psi_zero_plus > 0.0:
        # Integrand levels off at psi(0+) * s^e0.
        if e0 >= -1.0:
            return INF, "divergent"
        val, ok = geometric_tail(integrand, start, rel_tol)
        return (val, "ok") if ok else (INF, "unstable")

    rho = psi_small_exponent
    exact = rho is not None
    if rho is None:
        u0 = c1 * (start * 1e6) ** e1
        rho, stable = local_exponent(psi, u0)
        if not stable:
            # psi may be identically zero along the tail.
            if float(np.max(psi(np.array([c1 * start ** e1])))) == 0.0:
                return 0.0, "ok"
            val, ok = geometric_tail(integrand, start, rel_tol)
            return (val, "ok") if ok else (INF, "unstable")

    eff = e0 + rho * e1
    if exact:
        if eff >= -1.0:
            return INF, "divergent"
    else:
        if eff >= -1.0 - 1e-6:
            if eff >= -1.0 + 1e-6:
                return INF, "divergent"
            val, ok = geometric_tail(integrand, start, rel_tol)
            return (val, "ok") if ok else (INF, "unstable")
    val, ok = geometric_tail(integrand, start, rel_tol)
    return (val, "ok") if ok else (INF, "unstable")
