"""Monotone function descriptors and N-function calculus.

MonotoneFn is the workhorse for kernel functions psi: non-decreasing and
left-continuous on [0, inf), with the generalized left inverse
inf{t : fn(t) >= y}.  NFunction couples a convex G with its derivative g
and the growth indices i_G = inf t g(t)/G(t), s_G = sup t g(t)/G(t).

Everything is immutable after construction and safe to evaluate
concurrently.
"""

import json
import warnings
from dataclasses import dataclass

import numpy as np

from .quadrature import INF, adaptive_quad

_FAMILIES = (
    "identity",
    "power",
    "powsum",
    "zygmund",
    "zygmund_prime",
    "zygmund_loglog",
    "zygmund_loglog_prime",
    "entropy",
    "log1p",
    "table",
    "scaled",
    "inverse",
)

DEFAULT_INDEX_GRID = np.logspace(-8.0, 8.0, 512)


class InverseRangeError(ValueError):
    """Requested inverse value lies above the function's asymptotic range."""


def _as_float_array(t):
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0):
        raise ValueError("monotone functions are defined on [0, inf)")
    return arr


class MonotoneFn:
    """A non-decreasing, left-continuous function on [0, inf).

    Instances are built through the family constructors below; the
    constructor itself validates parameters and spot-checks monotonicity
    on a log grid.  Calling the instance evaluates it elementwise on
    scalars or arrays.
    """

    def __init__(self, family, **params):
        if family not in _FAMILIES:
            raise ValueError("unknown family %r" % (family,))
        self.family = family
        self.params = params
        self._validate()

    # -- construction -----------------------------------------------------

    @classmethod
    def identity(cls):
        return cls("identity")

    @classmethod
    def power(cls, exponent, coeff=1.0):
        return cls("power", exponent=float(exponent), coeff=float(coeff))

    @classmethod
    def powsum(cls, terms):
        """Sum of c * t^e terms; terms is a sequence of (c, e) pairs."""
        return cls("powsum", terms=tuple((float(c), float(e)) for c, e in terms))

    @classmethod
    def zygmund(cls, p, alpha, s):
        """t^p * log(s + t)^alpha."""
        return cls("zygmund", p=float(p), alpha=float(alpha), s=float(s))

    @classmethod
    def zygmund_prime(cls, p, alpha, s):
        """Exact derivative of the zygmund family."""
        return cls("zygmund_prime", p=float(p), alpha=float(alpha), s=float(s))

    @classmethod
    def zygmund_loglog(cls, p, alpha, s):
        """t^p * (log log(s + t))^alpha."""
        return cls("zygmund_loglog", p=float(p), alpha=float(alpha), s=float(s))

    @classmethod
    def zygmund_loglog_prime(cls, p, alpha, s):
        return cls("zygmund_loglog_prime", p=float(p), alpha=float(alpha),
                   s=float(s))

    @classmethod
    def entropy(cls):
        """(1 + t) log(1 + t) - t."""
        return cls("entropy")

    @classmethod
    def log1p(cls):
        return cls("log1p")

    @classmethod
    def table(cls, breakpoints, values):
        b = tuple(float(x) for x in breakpoints)
        v = tuple(float(x) for x in values)
        return cls("table", t=b, v=v)

    def scaled(self, outer=1.0, inner=1.0):
        """outer * self(inner * t)."""
        return MonotoneFn("scaled", outer=float(outer), inner=float(inner),
                          of=self)

    def inverse_fn(self):
        """The generalized left inverse as a MonotoneFn."""
        return MonotoneFn("inverse", of=self)

    def _validate(self):
        p = self.params
        if self.family == "power":
            if p["exponent"] < 0 or p["coeff"] < 0:
                raise ValueError("power family needs exponent >= 0, coeff >= 0")
        elif self.family == "powsum":
            if not p["terms"]:
                raise ValueError("powsum needs at least one term")
            if any(c < 0 or e < 0 for c, e in p["terms"]):
                raise ValueError("powsum terms need c >= 0, e >= 0")
        elif self.family in ("zygmund", "zygmund_prime"):
            if p["s"] <= 1.0:
                raise ValueError("zygmund family needs s > 1")
            if p["p"] < 1.0:
                raise ValueError("zygmund family needs p >= 1")
            if p["alpha"] < 0 and p["p"] + p["alpha"] / np.log(p["s"]) <= 0:
                raise ValueError("negative alpha too strong for monotonicity")
        elif self.family in ("zygmund_loglog", "zygmund_loglog_prime"):
            if p["s"] <= np.e:
                raise ValueError("log-log family needs s > e")
            if p["p"] < 1.0:
                raise ValueError("log-log family needs p >= 1")
            ll = np.log(p["s"]) * np.log(np.log(p["s"]))
            if p["alpha"] < 0 and p["p"] + p["alpha"] / ll <= 0:
                raise ValueError("negative alpha too strong for monotonicity")
        elif self.family == "table":
            b, v = np.asarray(p["t"]), np.asarray(p["v"])
            if b.size == 0 or b.size != v.size:
                raise ValueError("table needs equal-length breakpoints and values")
            if np.any(np.diff(b) <= 0) or np.any(b < 0):
                raise ValueError("table breakpoints must be sorted and nonnegative")
            if np.any(np.diff(v) < 0) or np.any(v < 0):
                raise ValueError("table values must be non-decreasing and >= 0")
        elif self.family == "scaled":
            if p["outer"] < 0 or p["inner"] <= 0:
                raise ValueError("scaling needs outer >= 0, inner > 0")
        # Spot check; closed-form families pass by construction, this guards
        # future family additions and pathological parameters.
        probe = np.logspace(-6, 6, 33)
        if self.family == "inverse":
            sup = self.params["of"].sup_value()
            if sup is not INF:
                probe = np.linspace(0.0, 0.99 * sup, 33)
        vals = self._eval(probe)
        if np.any(np.diff(vals) < -1e-12 * np.maximum(vals[1:], 1.0)):
            raise ValueError("%s instance is not non-decreasing" % self.family)

    # -- evaluation --------------------------------------------------------

    def __call__(self, t):
        arr = _as_float_array(t)
        out = self._eval(np.atleast_1d(arr))
        return float(out[0]) if np.isscalar(t) or arr.ndim == 0 else out

    def _eval(self, t):
        p = self.params
        fam = self.family
        if fam == "identity":
            return t.copy()
        if fam == "power":
            e, c = p["exponent"], p["coeff"]
            if e == 0:
                return np.full_like(t, c)
            return c * t ** e
        if fam == "powsum":
            out = np.zeros_like(t)
            for c, e in p["terms"]:
                out += c * t ** e if e != 0 else c
            return out
        if fam == "zygmund":
            return t ** p["p"] * np.log(p["s"] + t) ** p["alpha"]
        if fam == "zygmund_prime":
            pp, al, s = p["p"], p["alpha"], p["s"]
            lg = np.log(s + t)
            return t ** (pp - 1.0) * lg ** al * (pp + al * t / ((s + t) * lg))
        if fam == "zygmund_loglog":
            return t ** p["p"] * np.log(np.log(p["s"] + t)) ** p["alpha"]
        if fam == "zygmund_loglog_prime":
            pp, al, s = p["p"], p["alpha"], p["s"]
            lg = np.log(s + t)
            llg = np.log(lg)
            return t ** (pp - 1.0) * llg ** al * (
                pp + al * t / ((s + t) * lg * llg))
        if fam == "entropy":
            return (1.0 + t) * np.log1p(t) - t
        if fam == "log1p":
            return np.log1p(t)
        if fam == "table":
            b = np.asarray(p["t"])
            v = np.asarray(p["v"])
            idx = np.clip(np.searchsorted(b, t, side="left"), 0, v.size - 1)
            return v[idx]
        if fam == "scaled":
            return p["outer"] * p["of"]._eval(p["inner"] * t)
        if fam == "inverse":
            return generalized_inverse_vec(p["of"], t)
        raise AssertionError(fam)

    # -- structural metadata ------------------------------------------------

    def small_exponent(self):
        """Exact rho with self(u) ~ const * u^rho as u -> 0+, or None."""
        p = self.params
        fam = self.family
        if fam == "identity":
            return 1.0
        if fam == "power":
            return p["exponent"] if p["coeff"] > 0 else None
        if fam == "powsum":
            live = [e for c, e in p["terms"] if c > 0]
            return min(live) if live else None
        if fam in ("zygmund", "zygmund_loglog"):
            return p["p"]
        if fam in ("zygmund_prime", "zygmund_loglog_prime"):
            return p["p"] - 1.0
        if fam == "entropy":
            return 2.0
        if fam == "log1p":
            return 1.0
        if fam == "scaled":
            inner = p["of"].small_exponent()
            return inner if p["outer"] > 0 else None
        if fam == "inverse":
            rho = p["of"].small_exponent()
            if rho is not None and rho > 0 and p["of"].zero_plus_limit() == 0.0:
                return 1.0 / rho
            return None
        return None  # table

    def zero_plus_limit(self):
        """lim_{u -> 0+} self(u); None when not structurally known."""
        p = self.params
        fam = self.family
        if fam == "table":
            # value on the first interval right of 0, not the value at 0
            if p["t"][0] == 0.0 and len(p["v"]) > 1:
                return p["v"][1]
            return p["v"][0]
        if fam == "power":
            return p["coeff"] if p["exponent"] == 0 else 0.0
        if fam == "powsum":
            return sum(c for c, e in p["terms"] if e == 0)
        if fam == "zygmund_prime" and p["p"] == 1.0:
            return np.log(p["s"]) ** p["alpha"] * p["p"]
        if fam == "zygmund_loglog_prime" and p["p"] == 1.0:
            return np.log(np.log(p["s"])) ** p["alpha"] * p["p"]
        if fam == "scaled":
            inner = p["of"].zero_plus_limit()
            return None if inner is None else p["outer"] * inner
        if fam == "inverse":
            return None
        return 0.0

    def sup_value(self):
        """Limit at infinity; inf for unbounded families."""
        p = self.params
        fam = self.family
        if fam == "table":
            return p["v"][-1]
        if fam == "power":
            return p["coeff"] if p["exponent"] == 0 else (
                INF if p["coeff"] > 0 else 0.0)
        if fam == "powsum":
            if all(e == 0 or c == 0 for c, e in p["terms"]):
                return sum(c for c, e in p["terms"] if e == 0)
            return INF
        if fam == "scaled":
            inner = p["of"].sup_value()
            return p["outer"] * inner if inner != INF else (
                INF if p["outer"] > 0 else 0.0)
        return INF

    # -- serialization ------------------------------------------------------

    def to_json(self):
        p = self.params
        fam = self.family
        if fam in ("identity", "entropy", "log1p"):
            return {"family": fam}
        if fam == "power":
            return {"family": fam, "exponent": p["exponent"], "coeff": p["coeff"]}
        if fam == "powsum":
            return {"family": fam, "terms": [list(term) for term in p["terms"]]}
        if fam in ("zygmund", "zygmund_prime", "zygmund_loglog",
                   "zygmund_loglog_prime"):
            return {"family": fam, "p": p["p"], "alpha": p["alpha"], "s": p["s"]}
        if fam == "table":
            return {"family": fam, "t": list(p["t"]), "v": list(p["v"])}
        if fam == "scaled":
            return {"family": fam, "outer": p["outer"], "inner": p["inner"],
                    "of": p["of"].to_json()}
        if fam == "inverse":
            return {"family": fam, "of": p["of"].to_json()}
        raise AssertionError(fam)

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        fam = obj.get("family")
        if fam in ("identity", "entropy", "log1p"):
            return cls(fam)
        if fam == "power":
            return cls.power(obj["exponent"], obj.get("coeff", 1.0))
        if fam == "powsum":
            return cls.powsum(obj["terms"])
        if fam in ("zygmund", "zygmund_prime", "zygmund_loglog",
                   "zygmund_loglog_prime"):
            return cls(fam, p=float(obj["p"]), alpha=float(obj["alpha"]),
                       s=float(obj["s"]))
        if fam == "table":
            return cls.table(obj["t"], obj["v"])
        if fam == "scaled":
            return cls("scaled", outer=float(obj["outer"]),
                       inner=float(obj["inner"]), of=cls.from_json(obj["of"]))
        if fam == "inverse":
            return cls("inverse", of=cls.from_json(obj["of"]))
        raise ValueError("unknown monotone family in JSON: %r" % (fam,))

    def __repr__(self):
        return "MonotoneFn(%s)" % json.dumps(self.to_json())


def evaluate(fn, t):
    """Evaluate fn at t >= 0; rejects negative arguments."""
    return fn(t)


# -- generalized inverse ----------------------------------------------------

def generalized_inverse_vec(fn, y):
    """Vectorized inf{t : fn(t) >= y} for a batch of targets y."""
    y = np.asarray(y, dtype=float)
    if np.any(y < 0):
        raise ValueError("inverse targets must be nonnegative")
    out = np.zeros(y.shape, dtype=float)
    flat_y = y.ravel()
    flat_out = out.ravel()

    # Closed-form dispatch.
    fam = fn.family
    p = fn.params
    if fam == "identity":
        return y.copy() if y.ndim else float(y)
    if fam == "power" and p["coeff"] > 0 and p["exponent"] > 0:
        res = (y / p["coeff"]) ** (1.0 / p["exponent"])
        return res if y.ndim else float(res)
    if fam == "scaled" and p["outer"] > 0:
        res = generalized_inverse_vec(p["of"], y / p["outer"]) / p["inner"]
        return res if y.ndim else float(res)

    at_zero = float(np.atleast_1d(fn(0.0))[0])
    active = flat_y > at_zero
    if not active.any():
        return out if y.ndim else 0.0

    ya = flat_y[active]
    sup = fn.sup_value()
    if sup is not INF and np.any(ya > sup):
        raise InverseRangeError(
            "inverse target above the function's range (sup %.6g)" % sup)

    # Bracket each target between consecutive powers of two, then bisect.
    hi = np.ones_like(ya)
    lo = np.zeros_like(ya)
    need = fn(hi) < ya
    for _ in range(1100):
        if not need.any():
            break
        if np.any(hi[need] > 1e300):
            raise InverseRangeError("inverse target unreachable below 1e300")
        lo[need] = hi[need]
        hi[need] *= 2.0
        need = fn(hi) < ya
    if need.any():
        raise InverseRangeError("inverse target unreachable below 1e300")
    shrink = (lo == 0.0) & (fn(np.full_like(ya, 0.5)) >= ya)
    guess = np.full_like(ya, 0.5)
    for _ in range(1100):
        if not shrink.any():
            break
        hi[shrink] = guess[shrink]
        guess[shrink] *= 0.5
        if np.all(guess[shrink] < 1e-300):
            break
        shrink = shrink & (fn(guess) >= ya)
    lo = np.where((lo == 0.0) & (hi < 1.0), hi * 0.5, lo)

    for _ in range(64):
        mid = 0.5 * (lo + hi)
        below = fn(mid) < ya
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    flat_out[active] = 0.5 * (lo + hi)
    return out if y.ndim else float(flat_out[0])


def generalized_inverse(fn, y):
    """inf{t : fn(t) >= y}; error when y exceeds the asymptotic range."""
    return generalized_inverse_vec(fn, float(y))


# -- N-functions -------------------------------------------------------------

@dataclass(frozen=True)
class NFunction:
    """A convex N-function G with derivative g and growth indices."""

    G: MonotoneFn
    g: MonotoneFn
    i_G: float
    s_G: float
    exact_indices: bool = False
    conjugate_available: bool = True
    label: str = ""

    @classmethod
    def power(cls, p, coeff=1.0):
        """G(t) = coeff * t^p, p > 1; indices are exactly (p, p)."""
        if p <= 1:
            raise ValueError("an N-function needs p > 1")
        return cls(G=MonotoneFn.power(p, coeff),
                   g=MonotoneFn.power(p - 1.0, coeff * p),
                   i_G=float(p), s_G=float(p), exact_indices=True,
                   label="power(p=%g, coeff=%g)" % (p, coeff))

    @classmethod
    def power_sum(cls, terms):
        G = MonotoneFn.powsum(terms)
        g = MonotoneFn.powsum([(c * e, e - 1.0) for c, e in terms if c > 0])
        i, s = _index_estimate(G, g, DEFAULT_INDEX_GRID)
        return cls(G=G, g=g, i_G=i, s_G=s, label="powsum")

    @classmethod
    def zygmund(cls, p, alpha, s):
        """G(t) = t^p log(s+t)^alpha with the validity margin on s.

        The margin |alpha|/log(s) < (p-1)/2 keeps both indices inside
        (1 + (p-1)/2, p + (p-1)/2), a sufficient condition for the
        doubling pair; the threshold s_0 is not pinned down elsewhere.
        """
        if p <= 1:
            raise ValueError("zygmund N-function needs p > 1")
        if abs(alpha) / np.log(s) >= (p - 1.0) / 2.0:
            raise ValueError(
                "s too small for zygmund indices: need |alpha|/log(s) < (p-1)/2")
        G = MonotoneFn.zygmund(p, alpha, s)
        g = MonotoneFn.zygmund_prime(p, alpha, s)
        i, sG = _index_estimate(G, g, DEFAULT_INDEX_GRID, endpoint_value=p)
        return cls(G=G, g=g, i_G=i, s_G=sG,
                   label="zygmund(p=%g, alpha=%g, s=%g)" % (p, alpha, s))

    @classmethod
    def zygmund_loglog(cls, p, alpha, s):
        if p <= 1:
            raise ValueError("log-log N-function needs p > 1")
        ll = np.log(s) * np.log(np.log(s))
        if s <= np.e or abs(alpha) / ll >= (p - 1.0) / 2.0:
            raise ValueError(
                "s too small for log-log indices: need |alpha|/(log s loglog s)"
                " < (p-1)/2")
        G = MonotoneFn.zygmund_loglog(p, alpha, s)
        g = MonotoneFn.zygmund_loglog_prime(p, alpha, s)
        i, sG = _index_estimate(G, g, DEFAULT_INDEX_GRID, endpoint_value=p)
        return cls(G=G, g=g, i_G=i, s_G=sG,
                   label="zygmund_loglog(p=%g, alpha=%g, s=%g)" % (p, alpha, s))

    @classmethod
    def entropy(cls):
        """G(t) = (1+t)log(1+t) - t; in Delta_2 but not nabla_2."""
        G = MonotoneFn.entropy()
        g = MonotoneFn.log1p()
        i, s = _index_estimate(G, g, DEFAULT_INDEX_GRID)
        return cls(G=G, g=g, i_G=i, s_G=s, label="entropy")

    @classmethod
    def from_monotone(cls, G, g, label="custom"):
        i, s = _index_estimate(G, g, DEFAULT_INDEX_GRID)
        return cls(G=G, g=g, i_G=i, s_G=s, label=label)

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        kind = obj.get("kind")
        if kind == "power":
            return cls.power(obj["p"], obj.get("coeff", 1.0))
        if kind == "powsum":
            return cls.power_sum(obj["terms"])
        if kind == "zygmund":
            return cls.zygmund(obj["p"], obj["alpha"], obj["s"])
        if kind == "zygmund_loglog":
            return cls.zygmund_loglog(obj["p"], obj["alpha"], obj["s"])
        if kind == "entropy":
            return cls.entropy()
        raise ValueError("unknown N-function kind in JSON: %r" % (kind,))

    def to_json(self):
        lbl = self.label
        if lbl.startswith("power("):
            return {"kind": "power", "p": self.G.params["exponent"],
                    "coeff": self.G.params["coeff"]}
        if lbl.startswith("zygmund("):
            p = self.G.params
            return {"kind": "zygmund", "p": p["p"], "alpha": p["alpha"],
                    "s": p["s"]}
        if lbl.startswith("zygmund_loglog("):
            p = self.G.params
            return {"kind": "zygmund_loglog", "p": p["p"], "alpha": p["alpha"],
                    "s": p["s"]}
        if lbl == "entropy":
            return {"kind": "entropy"}
        if lbl == "powsum":
            return {"kind": "powsum",
                    "terms": [list(t) for t in self.G.params["terms"]]}
        raise ValueError("N-function %r has no JSON form" % (lbl,))


def _index_estimate(G, g, grid, endpoint_value=None):
    ratio = grid * g(grid) / G(grid)
    ratio = ratio[np.isfinite(ratio)]
    cands = list(ratio)
    if endpoint_value is not None:
        cands.append(endpoint_value)
    return float(np.min(cands)), float(np.max(cands))


def growth_indices(G, grid=None):
    """(i_G, s_G) as inf/sup of t g(t)/G(t); exact for the power family.

    Warns when the estimate moves by more than 1% under 2x grid
    refinement.
    """
    if G.exact_indices:
        return G.i_G, G.s_G
    if grid is None:
        grid = DEFAULT_INDEX_GRID
    grid = np.asarray(grid, dtype=float)
    i1, s1 = _index_estimate(G.G, G.g, grid)
    fine = np.logspace(np.log10(grid[0]), np.log10(grid[-1]), grid.size * 2)
    i2, s2 = _index_estimate(G.G, G.g, fine)
    if abs(i2 - i1) > 0.01 * abs(i1) or abs(s2 - s1) > 0.01 * abs(s1):
        warnings.warn("growth index estimate not grid-stable; refine the grid",
                      RuntimeWarning, stacklevel=2)
    return i2, s2


def young_conjugate(G, s):
    """sup_t (s t - G(t)), located by solving g(t) = s.

    Returns inf when the supremum is not finitely representable (g bounded
    below s, or the maximizer overflows the search range).
    """
    s = float(s)
    if s < 0:
        raise ValueError("young_conjugate needs s >= 0")
    if s == 0.0:
        return 0.0
    try:
        tstar = generalized_inverse(G.g, s)
    except InverseRangeError:
        return INF
    if tstar == INF:
        return INF
    return s * tstar - G.G(tstar)


@dataclass(frozen=True)
class DoublingReport:
    delta2: bool
    c_delta2: float
    nabla2: bool
    c_nabla2: float


def check_doubling(G):
    """Grid certificate for Delta_2 and (through the conjugate) nabla_2.

    The Delta_2 constant is the grid supremum of G(2t)/G(t); the flag is
    dropped when the ratio is still climbing at the grid's upper edge.
    """
    t = np.logspace(-8, 8, 257)
    ratios = G.G(2.0 * t) / G.G(t)
    ratios = ratios[np.isfinite(ratios)]
    delta2 = bool(ratios[-1] <= 1.01 * ratios[-16])
    c_d2 = float(np.max(ratios))

    s_grid = np.logspace(-8, np.log10(50.0), 65)
    conj = np.array([young_conjugate(G, s) for s in s_grid])
    conj2 = np.array([young_conjugate(G, 2.0 * s) for s in s_grid])
    if np.any(np.isinf(conj)) or np.any(np.isinf(conj2)):
        return DoublingReport(delta2, c_d2, False, INF)
    with np.errstate(invalid="ignore", divide="ignore"):
        cr = conj2 / conj
    cr = cr[np.isfinite(cr)]
    nabla2 = bool(cr[-1] <= 1.01 * cr[-16])
    return DoublingReport(delta2, c_d2, nabla2, float(np.max(cr)))


def orlicz_EF(A, B, sigma, t):
    """The (E, F) pair of auxiliary Young-type functions at argument t.

    E(t) = (int_0^t (r/A(r))^{1/(sigma-1)} dr)^{(sigma-1)/sigma}
    F(t) = (int_0^t B(r) / r^{1 + sigma/(sigma-1)} dr)^{(sigma-1)/sigma}

    Divergent integrals yield inf markers, never exceptions.
    """
    if sigma <= 1:
        raise ValueError("orlicz_EF needs sigma > 1")
    t = float(t)
    if t < 0:
        raise ValueError("t must be nonnegative")
    if t == 0.0:
        return 0.0, 0.0
    outer = (sigma - 1.0) / sigma

    a_exp = A.G.small_exponent()
    if a_exp is not None and (1.0 - a_exp) / (sigma - 1.0) <= -1.0:
        E = INF
    else:
        E = adaptive_quad(
            lambda r: (r / A.G(r)) ** (1.0 / (sigma - 1.0)), 0.0, t) ** outer

    b_exp = B.G.small_exponent()
    sing = 1.0 + sigma / (sigma - 1.0)
    if b_exp is not None and b_exp - sing <= -1.0:
        F = INF
    else:
        F = adaptive_quad(lambda r: B.G(r) / r ** sing, 0.0, t) ** outer
    return E, F


def check_compatibility(A, B, sigma, delta_candidates, t_grid):
    """Smallest candidate delta with F(E(t)/delta) <= delta A(t)/t on the grid.

    Returns None when no candidate works.  E must be finite-valued on the
    grid (use orlicz_EF first when in doubt).
    """
    t_grid = [float(t) for t in t_grid]
    if not t_grid:
        raise ValueError("t_grid must not be empty")
    E_vals = []
    for t in t_grid:
        E, _ = orlicz_EF(A, B, sigma, t)
        if E == INF:
            raise ValueError("E is not finite-valued at t=%g" % t)
        E_vals.append(E)
    for delta in sorted(float(d) for d in delta_candidates):
        ok = True
        for t, E in zip(t_grid, E_vals):
            _, F = orlicz_EF(A, B, sigma, E / delta)
            if not F <= delta * A.G(t) / t:
                ok = False
                break
        if ok:
            return delta
    return None
