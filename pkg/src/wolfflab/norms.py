"""Rearrangement-invariant norms and modular functionals.

Everything evaluates through the decreasing rearrangement: a step
profile is the native input, and grid functions are rearranged on
entry.  Lorentz integrals of f* have closed piecewise-power forms;
the f** variant is integrated adaptively piece by piece with closed
head and tail terms.  Morrey-type suprema run over a dyadic family
of balls and are certified lower bounds of the true supremum.
"""
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .monotone import MonotoneFn, NFunction
from .quadrature import adaptive_quad
from .rearrangement import GridFunction, StepProfile, decreasing_rearrangement

INF = float("inf")


@dataclass(frozen=True)
class LorentzParams:
    """Exponents and flavor of a Lorentz functional.

    variant 'star' integrates s^(1/p-1/q) f*(s); 'doublestar' uses the
    running average f** instead.  domain_measure caps the integration
    window at |Omega|.
    """

    p: float
    q: float = INF
    variant: str = "star"
    domain_measure: float = INF

    def __post_init__(self):
        if not self.p > 0 or math.isinf(self.p):
            raise ValueError("need 0 < p < inf")
        if not self.q > 0:
            raise ValueError("need q > 0")
        if self.variant not in ("star", "doublestar"):
            raise ValueError("variant must be 'star' or 'doublestar'")
        if not self.domain_measure > 0:
            raise ValueError("domain_measure must be positive")

    def is_banach(self):
        """Whether the functional is an actual norm (triangle constant 1)."""
        if self.variant == "star":
            return 1.0 <= self.q <= self.p
        return self.p >= 1.0 and self.q >= 1.0


@dataclass(frozen=True)
class ModularFunctional:
    """T(f) = int_0^inf s^sigma H(s^rho f*(s)) ds with a side tag."""

    H: MonotoneFn
    sigma: float
    rho: float
    side: str = "X"

    def __post_init__(self):
        if self.side not in ("X", "Y"):
            raise ValueError("side must be 'X' or 'Y'")


def _as_profile(f):
    if isinstance(f, StepProfile):
        return f
    if isinstance(f, GridFunction):
        return decreasing_rearrangement(f)
    raise TypeError("expected StepProfile or GridFunction")


# -- Lorentz ------------------------------------------------------------------

def _star_norm(prof, p, q, L):
    edges, vals = prof.edges, prof.values
    if math.isinf(q):
        best = 0.0
        for k in range(vals.size):
            if edges[k] >= L:
                break
            b = min(edges[k + 1], L)
            best = max(best, vals[k] * b ** (1.0 / p))
        return best
    total = 0.0
    for k in range(vals.size):
        if edges[k] >= L:
            break
        a, b = edges[k], min(edges[k + 1], L)
        total += vals[k] ** q * (p / q) * (b ** (q / p) - a ** (q / p))
    return total ** (1.0 / q)


def _doublestar_pieces(prof, L):
    """(a, b, v, B) with f**(s) = v + B/s on [a, b), clipped to (0, L)."""
    edges, vals = prof.edges, prof.values
    out = []
    for k in range(vals.size):
        if edges[k] >= L:
            return out
        a, b = edges[k], min(edges[k + 1], L)
        B = max(prof.cumint(a) - vals[k] * a, 0.0)   # >= 0 up to roundoff
        out.append((a, b, vals[k], B))
    T = edges[-1]
    if L > T:
        out.append((T, L, 0.0, prof.total_mass))
    return out


def _doublestar_norm(prof, p, q, L):
    pieces = _doublestar_pieces(prof, L)
    if math.isinf(q):
        best = 0.0
        for a, b, v, B in pieces:
            g = lambda s: s ** (1.0 / p) * (v + B / s)
            if math.isinf(b):
                # only the B s^(1/p-1) part survives at infinity; it grows
                # for p < 1, is constant for p = 1, decays for p > 1
                if v > 0 or (B > 0 and p < 1):
                    return INF
                best = max(best, g(a))
                continue
            cand = [g(b)] if a == 0 else [g(a), g(b)]
            if v > 0 and B > 0 and p > 1:
                t = (p - 1.0) * B / v
                if a < t < b:
                    cand.append(g(t))
            best = max(best, max(cand))
        return best
    total = 0.0
    for a, b, v, B in pieces:
        if B == 0.0:
            # constant stretch, the power integral is exact
            total += v ** q * (p / q) * (b ** (q / p) - a ** (q / p))
        elif v == 0.0:
            e = q / p - q
            if math.isinf(b):
                if e >= 0:
                    return INF
                total += B ** q * (-(a ** e)) / e
            else:
                total += B ** q * (b ** e - a ** e) / e
        else:
            total += adaptive_quad(
                lambda s: s ** (q / p - 1.0) * (v + B / s) ** q, a, b,
                rel_tol=1e-12)
    return total ** (1.0 / q)


def lorentz_norm(f, params):
    """Lambda^{p,q} (star) or Lambda^{[p,q]} (doublestar) of f."""
    prof = _as_profile(f)
    if prof.values.size == 0:
        return 0.0
    p, q, L = params.p, params.q, params.domain_measure
    if params.variant == "star":
        return _star_norm(prof, p, q, L)
    return _doublestar_norm(prof, p, q, L)


# -- Luxemburg ----------------------------------------------------------------

def _luxemburg_scalar(modular_fn):
    """Smallest lam with modular_fn(lam) <= 1; modular_fn is decreasing.

    Step profiles make the modular finite and continuous for every
    lam > 0, and it blows up as lam -> 0, so a root always brackets.
    """
    lo = hi = 1.0
    for _ in range(200):
        if modular_fn(hi) <= 1.0:
            break
        hi *= 2.0
    for _ in range(200):
        if modular_fn(lo) > 1.0:
            break
        lo /= 2.0
    if modular_fn(lo) <= 1.0:        # modular never exceeds 1
        return 0.0
    return float(brentq(lambda lam: modular_fn(lam) - 1.0, lo, hi,
                        rtol=1e-12, xtol=1e-300))


def luxemburg_norm(A, f):
    """Luxemburg norm for the N-function A: inf{lam: int A(f*/lam) <= 1}."""
    if not isinstance(A, NFunction):
        raise TypeError("expected an NFunction")
    prof = _as_profile(f)
    if prof.values.size == 0:
        return 0.0
    widths = np.diff(prof.edges)
    vals = prof.values
    return _luxemburg_scalar(
        lambda lam: float(np.sum(widths * A.G(vals / lam))))


_LLOGL = MonotoneFn.zygmund(1.0, 1.0, math.e)   # u log(e + u)


def llogl_norm(f):
    """Luxemburg-type norm with modular u log(e+u)."""
    prof = _as_profile(f)
    if prof.values.size == 0:
        return 0.0
    widths = np.diff(prof.edges)
    vals = prof.values
    return _luxemburg_scalar(
        lambda lam: float(np.sum(widths * _LLOGL(vals / lam))))


# -- Morrey family ------------------------------------------------------------

def _dyadic_ball_family(f):
    """(R, centers) pairs: dyadic radii and stride-matched center lattices.

    Radii run from 4x the support diameter down to one cell diagonal;
    center lattices thin out with the radius, and the max-|f| cell is
    always a candidate center.  The family only grows under grid
    refinement, so reported suprema are stable lower bounds.
    """
    h, n = f.spacing, f.dim
    absw = np.abs(f.values)
    nz = np.argwhere(absw > 0)
    if nz.size == 0:
        return []
    lo_idx, hi_idx = nz.min(axis=0), nz.max(axis=0)
    diam = float(np.linalg.norm((hi_idx - lo_idx + 1) * h))
    all_centers = f.cell_centers().reshape(f.shape + (n,))
    peak = tuple(np.unravel_index(np.argmax(absw), f.shape))
    peak_center = all_centers[peak].reshape(1, n)
    out = []
    R = 4.0 * diam
    r_min = h * math.sqrt(n)
    while R >= r_min * 0.999999:
        stride = max(1, int(round(R / (2.0 * h))))
        sel = tuple(slice(0, f.shape[d], stride) for d in range(n))
        lattice = all_centers[sel].reshape(-1, n)
        out.append((R, np.concatenate([lattice, peak_center])))
        R /= 2.0
    return out


def morrey_norm(f, q, theta):
    """sup over dyadic balls of R^((theta-n)/q) ||f||_{L^q(B cap window)}."""
    if not isinstance(f, GridFunction):
        raise TypeError("expected a GridFunction")
    n = f.dim
    if q < 1:
        raise ValueError("need q >= 1")
    if not 0 <= theta <= n:
        raise ValueError("need 0 <= theta <= n")
    cells = f.cell_centers()
    w = np.abs(f.values).ravel() ** q * f.cell_volume
    best = 0.0
    for R, centers in _dyadic_ball_family(f):
        for i in range(0, centers.shape[0], 256):
            chunk = centers[i:i + 256]
            d2 = np.sum((chunk[:, None, :] - cells[None, :, :]) ** 2, axis=2)
            mass = (d2 <= R * R) @ w
            val = R ** ((theta - n) / q) * np.max(mass) ** (1.0 / q)
            best = max(best, float(val))
    return best


def lorentz_morrey_norm(f, t, q, theta):
    """sup over dyadic balls of R^((theta-n)/t) Lambda^{t,q}(f restricted)."""
    if not isinstance(f, GridFunction):
        raise TypeError("expected a GridFunction")
    n = f.dim
    if not 0 <= theta <= n:
        raise ValueError("need 0 <= theta <= n")
    params = LorentzParams(p=t, q=q, variant="star")
    cells = f.cell_centers()
    absv = np.abs(f.values).ravel()
    best = 0.0
    for R, centers in _dyadic_ball_family(f):
        for c in centers:
            d2 = np.sum((cells - c) ** 2, axis=1)
            sel = absv[d2 <= R * R]
            sel = np.sort(sel[sel > 0])[::-1]
            if sel.size == 0:
                continue
            prof = StepProfile.from_values(sel, f.cell_volume)
            val = R ** ((theta - n) / t) * lorentz_norm(prof, params)
            best = max(best, float(val))
    return best


# -- modular functionals --------------------------------------------------------

def _head_integral(fn, b, rel_tol=1e-10):
    """int_0^b fn with a possibly divergent 0+ end, by geometric stages.

    Stage integrals over [b 10^-2(j+1), b 10^-2j] that fail to decay
    signal divergence; decaying stages are summed until negligible.
    """
    total = adaptive_quad(fn, b * 1e-2, b, rel_tol=rel_tol)
    prev = None
    hi = b * 1e-2
    for _ in range(12):
        lo = hi * 1e-2
        stage = adaptive_quad(fn, lo, hi, rel_tol=rel_tol)
        if prev is not None and stage >= 0.99 * prev and stage > 0:
            if stage < rel_tol * max(total, 1e-300):
                return total + stage
            return INF
        total += stage
        if stage < rel_tol * max(abs(total), 1e-300):
            return total
        prev = stage
        hi = lo
    # stages kept shrinking but slowly: geometric remainder estimate
    if prev and stage < prev:
        total += stage * (stage / prev) / (1.0 - stage / prev)
    return total


def modular(T, f):
    """T(f) = int_0^inf s^sigma H(s^rho f*(s)) ds, inf on divergence."""
    if not isinstance(T, ModularFunctional):
        raise TypeError("expected a ModularFunctional")
    prof = _as_profile(f)
    H, sig, rho = T.H, T.sigma, T.rho
    H0 = float(H(0.0))
    edges, vals = prof.edges, prof.values
    if vals.size == 0:
        if H0 == 0.0:
            return 0.0
        return INF                       # H(0) > 0 integrates to infinity
    total = 0.0
    for k in range(vals.size):
        a, b = edges[k], edges[k + 1]
        v = vals[k]
        fn = lambda s, v=v: s ** sig * H(s ** rho * v)
        if a == 0.0:
            piece = _head_integral(fn, b)
        else:
            piece = adaptive_quad(fn, a, b, rel_tol=1e-10)
        if math.isinf(piece):
            return INF
        total += piece
    # beyond the support f* is 0
    if H0 > 0.0:
        if sig >= -1.0:
            return INF
        total += H0 * edges[-1] ** (sig + 1.0) / (-sig - 1.0)
    return total
