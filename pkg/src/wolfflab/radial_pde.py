"""Radial solver for the model quasilinear problem and the potential
estimate it feeds.

The model operator is the radial isotropic one, A(xi) = g(|xi|)xi/|xi|
with g the density of an N-function G.  On a ball of radius R_dom with
radially decreasing datum f and zero boundary value the divergence
equation reduces exactly to an ODE:

    g(-u'(r)) = r^(1-n) * int_0^r s^(n-1) f(s) ds,

so u(r) = int_r^R_dom g^{-1}(flux) ds with no discretization error
beyond quadrature.  That exactness is the point: the two-sided bound
through the truncated potential W^R_{1,G} f can then be stress-tested
with the quadrature as the only noise source.
"""

import math
from dataclasses import dataclass

import numpy as np

from .monotone import NFunction, generalized_inverse_vec
from .potentials import PotentialParams, QuadratureSettings, wolff
from .quadrature import INF, adaptive_quad
from .rearrangement import RadialLift, StepProfile, unit_ball_volume

__all__ = [
    "RadialProblem",
    "EstimateReport",
    "solve_radial",
    "estimate_check",
]


@dataclass(frozen=True)
class RadialProblem:
    """Dirichlet problem -div A(grad u) = f on the ball of radius R_dom."""

    n: int
    G: NFunction
    f: StepProfile
    R_dom: float

    def __post_init__(self):
        if self.n not in (1, 2, 3):
            raise ValueError("dimension must be 1, 2, or 3")
        if not isinstance(self.G, NFunction):
            raise TypeError("G must be an NFunction")
        if not isinstance(self.f, StepProfile):
            raise TypeError("datum must be a StepProfile")
        if not (np.isfinite(self.R_dom) and self.R_dom > 0):
            raise ValueError("domain radius must be positive and finite")

    def source_cum(self, s):
        """int_0^s tau^(n-1) f(tau) dtau, exact on the datum's steps."""
        s = np.asarray(s, dtype=float)
        e, v = self.f.edges, self.f.values
        hi = np.minimum(s[..., None], e[1:])
        lo = np.minimum(s[..., None], e[:-1])
        pieces = (np.maximum(hi, 0.0) ** self.n
                  - np.maximum(lo, 0.0) ** self.n) / self.n
        return pieces @ v

    def flux(self, s):
        """g(-u') at radius s, i.e. s^(1-n) * source_cum(s)."""
        s = np.asarray(s, dtype=float)
        return np.divide(self.source_cum(s), s ** (self.n - 1.0),
                         out=np.zeros(s.shape), where=s > 0)


def _slope(prob):
    g = prob.G.g

    def fn(s):
        return generalized_inverse_vec(g, prob.flux(s))

    return fn


def solve_radial(prob, r_grid):
    """Solution values u(r) on a grid of radii.

    Radii beyond R_dom get 0 (the zero extension); negative radii are
    rejected.  The integral is accumulated once over the sorted grid so
    a fine grid costs one pass.
    """
    r = np.atleast_1d(np.asarray(r_grid, dtype=float))
    if r.ndim != 1:
        raise ValueError("radius grid must be one-dimensional")
    if r.size and r.min() < 0:
        raise ValueError("radii must be nonnegative")
    out = np.zeros(r.size)
    if prob.f.total_mass == 0.0 or r.size == 0:
        return out

    slope = _slope(prob)
    inside = np.flatnonzero(r < prob.R_dom)
    if inside.size == 0:
        return out
    order = inside[np.argsort(r[inside])[::-1]]
    cuts = [e for e in prob.f.edges if 0.0 < e < prob.R_dom]

    acc = 0.0
    upper = prob.R_dom
    for idx in order:
        lo = r[idx]
        for a, b in _split(lo, upper, cuts):
            acc += adaptive_quad(slope, a, b, rel_tol=1e-10)
        out[idx] = acc
        upper = lo
    return out


def _split(lo, hi, cuts):
    """Subintervals of [lo, hi] cut at the datum's step edges."""
    if hi <= lo:
        return []
    pts = [lo] + [c for c in cuts if lo < c < hi] + [hi]
    return list(zip(pts[:-1], pts[1:]))


def _dyadic_floor(x):
    # log2 can round up at a power-of-two boundary; keep c <= x exact
    c = 2.0 ** math.floor(math.log2(x))
    return c / 2.0 if c > x else c


def _dyadic_ceil(x):
    c = 2.0 ** math.ceil(math.log2(x))
    return c * 2.0 if c < x else c


@dataclass
class EstimateReport:
    """Two-sided potential estimate data over an (x, R) sweep.

    Rows are evaluation radii, columns the R sweep.  lower_ratio is
    u(x)/(W^R f(x) - R) where the denominator is positive and NaN where
    it is not (R too large for the lower bound to bite); upper_ratio is
    u(x)/(inf_B u + W^R f(x) + R).  c_lower is the largest dyadic
    constant with u >= c_lower (W^R - R)_+ everywhere on the sweep,
    c_upper the smallest dyadic constant with u <= c_upper (inf + W + R);
    slacks are the corresponding margins, nonnegative by construction.
    """

    x_radii: np.ndarray
    r_sweep: np.ndarray
    u_values: np.ndarray
    w_values: np.ndarray
    inf_u: np.ndarray
    lower_ratio: np.ndarray
    upper_ratio: np.ndarray
    c_lower: float
    c_upper: float
    lower_slack: np.ndarray
    upper_slack: np.ndarray

    def to_csv(self, path_or_buf):
        rows = ["x,R,u,w,inf_u,lower_ratio,upper_ratio,"
                "lower_slack,upper_slack,c_lower,c_upper"]
        for i, x in enumerate(self.x_radii):
            for j, R in enumerate(self.r_sweep):
                rows.append(",".join("%.17g" % v for v in (
                    x, R, self.u_values[i], self.w_values[i, j],
                    self.inf_u[i, j], self.lower_ratio[i, j],
                    self.upper_ratio[i, j], self.lower_slack[i, j],
                    self.upper_slack[i, j], self.c_lower, self.c_upper)))
        text = "\n".join(rows) + "\n"
        if hasattr(path_or_buf, "write"):
            path_or_buf.write(text)
        else:
            with open(path_or_buf, "w") as fh:
                fh.write(text)


def estimate_check(prob, x_points, R_sweep,
                   quadrature=QuadratureSettings()):
    """Evaluate both sides of the pointwise potential bound on a sweep.

    For each evaluation radius x and truncation R the report records
    u(x), W^R_{1,G} f(x), the exact inf of u over B(x, R), the two
    ratios, and the fitted dyadic constants.  No admissibility
    threshold in R is asserted; the sweep is the record of where each
    side bites.
    """
    if not prob.G.s_G < prob.n:
        raise ValueError(
            "estimate needs the upper growth index below the dimension "
            "(s_G = %.6g, n = %d)" % (prob.G.s_G, prob.n))
    x = np.atleast_1d(np.asarray(x_points, dtype=float))
    Rs = np.atleast_1d(np.asarray(R_sweep, dtype=float))
    if x.size == 0 or Rs.size == 0:
        raise ValueError("need at least one evaluation point and one R")
    if x.min() < 0 or x.max() > prob.R_dom:
        raise ValueError("evaluation radii must lie in [0, R_dom]")
    if Rs.min() <= 0 or not np.all(np.isfinite(Rs)):
        raise ValueError("truncation radii must be positive and finite")

    psi = prob.G.g.inverse_fn()
    wn = unit_ball_volume(prob.n)
    lift = RadialLift(StepProfile(wn * prob.f.edges ** prob.n,
                                  prob.f.values), prob.n)

    u = solve_radial(prob, x)
    far = np.minimum(x[:, None] + Rs[None, :], prob.R_dom)
    inf_u = solve_radial(prob, np.unique(far))
    inf_u = inf_u[np.searchsorted(np.unique(far), far)]

    w = np.empty((x.size, Rs.size))
    for j, R in enumerate(Rs):
        pars = PotentialParams(alpha=1.0, n=prob.n, psi=psi, R=float(R),
                               quadrature=quadrature)
        for i, rho in enumerate(x):
            point = np.zeros(prob.n)
            point[0] = rho
            w[i, j] = wolff(lift, point, pars)

    gap = w - Rs[None, :]
    lower_ratio = np.where(gap > 0, u[:, None] / np.where(gap > 0, gap, 1.0),
                           np.nan)
    denom = inf_u + w + Rs[None, :]
    upper_ratio = u[:, None] / denom

    active = np.isfinite(lower_ratio)
    if active.any():
        worst = lower_ratio[active].min()
        c_lower = _dyadic_floor(worst) if worst > 0 else 0.0
    else:
        c_lower = INF
    peak = upper_ratio.max()
    c_upper = _dyadic_ceil(peak) if peak > 0 else 0.0

    lower_term = np.where(gap > 0, gap, 0.0)
    if np.isfinite(c_lower):
        lower_slack = u[:, None] - c_lower * lower_term
    else:
        lower_slack = np.where(lower_term > 0, -INF, u[:, None] + 0.0 * gap)
    upper_slack = c_upper * denom - u[:, None]

    return EstimateReport(
        x_radii=x, r_sweep=Rs, u_values=u, w_values=w, inf_u=inf_u,
        lower_ratio=lower_ratio, upper_ratio=upper_ratio,
        c_lower=c_lower, c_upper=c_upper,
        lower_slack=lower_slack, upper_slack=upper_slack)
