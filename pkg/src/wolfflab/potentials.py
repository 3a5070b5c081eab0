"""Potential operators on grid and radial-lift inputs.

Everything reduces to the radial mass function r -> int_{B(x,r)} |f|,
which is a step function of r for grids (sorted cell distances) and a
short sum of ball-intersection volumes for radial lifts.  The outer
one-dimensional integrals then run on log-spaced composite rules with
analytic constant-mass tails.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .monotone import MonotoneFn
from .quadrature import (
    INF,
    QuadratureError,
    adaptive_quad,
    local_exponent,
    log_midpoint,
    tail_psi_integral,
)
from .rearrangement import (
    GridFunction,
    RadialLift,
    StepProfile,
    unit_ball_volume,
)


@dataclass(frozen=True)
class QuadratureSettings:
    """Outer-integral controls: node density, radial window, tail tolerance."""

    nodes_per_decade: int = 64
    r_min: float = 0.0          # 0 means: pick from the input's scales
    r_max: float = 0.0          # 0 means: end of the mass support
    tail_tol: float = 1e-9

    def __post_init__(self):
        if self.nodes_per_decade < 4:
            raise ValueError("need at least 4 nodes per decade")
        if self.tail_tol <= 0:
            raise ValueError("tail tolerance must be positive")


@dataclass(frozen=True)
class PotentialParams:
    alpha: float
    n: int
    psi: MonotoneFn
    R: float = INF
    quadrature: QuadratureSettings = field(default_factory=QuadratureSettings)

    def __post_init__(self):
        if not 0 < self.alpha < self.n:
            raise ValueError("need 0 < alpha < n")
        if not self.R > 0:
            raise ValueError("truncation radius must be positive")


# -- ball intersection geometry -------------------------------------------------

def _lens_vec(d, r, rho, n):
    """|B(0, r) ∩ B(c, rho)| with |c| = d, vectorized over r."""
    r = np.asarray(r, dtype=float)
    out = np.zeros_like(r)
    if rho <= 0:
        return out
    small = np.minimum(r, rho)
    wn = unit_ball_volume(n)
    contained = d <= np.abs(r - rho)
    disjoint = d >= r + rho
    out[contained] = wn * small[contained] ** n
    mid = ~contained & ~disjoint & (r > 0)
    if not np.any(mid):
        return out
    rm, dm = r[mid], d
    if n == 1:
        out[mid] = np.minimum(rm, dm + rho) - np.maximum(-rm, dm - rho)
    elif n == 2:
        c1 = np.clip((dm ** 2 + rm ** 2 - rho ** 2) / (2 * dm * rm), -1, 1)
        c2 = np.clip((dm ** 2 + rho ** 2 - rm ** 2) / (2 * dm * rho), -1, 1)
        spread = ((-dm + rm + rho) * (dm + rm - rho)
                  * (dm - rm + rho) * (dm + rm + rho))
        out[mid] = (rm ** 2 * np.arccos(c1) + rho ** 2 * np.arccos(c2)
                    - 0.5 * np.sqrt(np.maximum(spread, 0.0)))
    elif n == 3:
        out[mid] = (np.pi * (rm + rho - dm) ** 2
                    * (dm ** 2 + 2 * dm * (rm + rho) - 3 * (rm - rho) ** 2)
                    / (12 * dm))
    else:
        out[mid] = [_lens_generic(dm, float(rr), rho, n) for rr in rm]
    return out


def _cap_volume(r, a, n):
    # volume of {x in B(0,r): x_1 > a}, a in [-r, r]
    wprev = unit_ball_volume(n - 1)
    return adaptive_quad(
        lambda x: wprev * np.maximum(r * r - x * x, 0.0) ** ((n - 1) / 2.0),
        a, r, rel_tol=1e-11)

def _lens_generic(d, r, rho, n):
    xstar = (d * d + r * r - rho * rho) / (2 * d)
    return _cap_volume(r, xstar, n) + _cap_volume(rho, d - xstar, n)


def lens_volume(d, r1, r2, n):
    """Volume of the intersection of balls with radii r1, r2 at center
    distance d, in R^n.  Closed forms for n <= 3, cross-section
    quadrature otherwise."""
    if r1 <= 0 or r2 <= 0:
        return 0.0
    if d < 0:
        raise ValueError("center distance must be nonnegative")
    if d >= r1 + r2:
        return 0.0
    if d <= abs(r1 - r2):
        return unit_ball_volume(n) * min(r1, r2) ** n
    if n <= 3:
        return float(_lens_vec(d, np.array([r1]), r2, n)[0])
    return _lens_generic(d, r1, r2, n)


# -- radial mass profiles -------------------------------------------------------

class _GridMass:
    """r -> int_{B(x,r)} |f| for a GridFunction: cell-center counting."""

    def __init__(self, f, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (f.dim,):
            raise ValueError("point dimension does not match the grid")
        d = np.linalg.norm(f.cell_centers() - x, axis=1)
        w = np.abs(f.values).ravel() * f.cell_volume
        order = np.argsort(d)
        self.dists = d[order]
        self.cum = np.concatenate([[0.0], np.cumsum(w[order])])
        self.weights = w[order]
        self.total = float(self.cum[-1])
        self.spacing = f.spacing
        self.r_outer = (float(max(self.dists[-1], self.spacing / 2))
                        if self.total > 0 else 0.0)
        # value of |f| on the cell the point falls in, for the small-r model
        idx = np.floor((x - f.origin) / f.spacing).astype(int)
        if np.all(idx >= 0) and np.all(idx < np.asarray(f.shape)):
            self.local_value = float(abs(f.values[tuple(idx)]))
        else:
            self.local_value = 0.0

    def __call__(self, r):
        r_arr = np.atleast_1d(np.asarray(r, dtype=float))
        out = self.cum[np.searchsorted(self.dists, r_arr, side="right")]
        return out if np.ndim(r) else float(out[0])


class _RadialMass:
    """Layer-cake mass for a radial lift: sum of lens volumes."""

    def __init__(self, lift, x):
        x = np.asarray(x, dtype=float)
        self.dist = float(np.linalg.norm(x))
        self.n = lift.n
        p = lift.profile
        self.rhos = lift.level_radii()
        v = p.values
        self.dv = np.concatenate([v[:-1] - v[1:], v[-1:]]) if v.size else v
        self.total = p.total_mass
        self.r_outer = self.dist + lift.support_radius
        self.local_value = float(lift.at_radius(self.dist))

    def __call__(self, r):
        r_arr = np.atleast_1d(np.asarray(r, dtype=float))
        out = np.zeros_like(r_arr)
        for dv, rho in zip(self.dv, self.rhos):
            out += dv * _lens_vec(self.dist, r_arr, float(rho), self.n)
        return out if np.ndim(r) else float(out[0])


def _mass_profile(f, x):
    if isinstance(f, GridFunction):
        return _GridMass(f, x)
    if isinstance(f, RadialLift):
        return _RadialMass(f, x)
    raise TypeError("expected GridFunction or RadialLift")


def ball_mass(f, x, r):
    """int_{B(x,r)} |f|; exact cell counting or layer-cake lens sum."""
    if r <= 0:
        raise ValueError("ball radius must be positive")
    return float(_mass_profile(f, x)(r))


# -- outer integrals ------------------------------------------------------------

def _low_cutoff(mass, alpha, r_hi, settings):
    if settings.r_min > 0:
        return min(settings.r_min, r_hi / 2)
    if isinstance(mass, _GridMass):
        r_lo = mass.spacing / 4
    else:
        scale = max(mass.r_outer, mass.dist, 1.0)
        # keep the neglected head below tolerance even for small alpha
        r_lo = scale * 10 ** (-14.0 / max(alpha, 0.5))
        r_lo = min(r_lo, scale * 1e-4)
    return min(r_lo, r_hi / 2)


def wolff(f, x, params):
    """W potential: int_0^R r^(alpha-1) psi(r^(alpha-n) ball mass) dr.

    Returns inf as a first-class marker when the tail integral is
    certified divergent.
    """
    alpha, n, psi, R = params.alpha, params.n, params.psi, params.R
    _check_dim(f, n)
    q = params.quadrature
    mass = _mass_profile(f, x)

    if mass.total == 0:
        psi0 = float(psi(0.0))
        if psi0 == 0.0:
            return 0.0
        return psi0 * R ** alpha / alpha if np.isfinite(R) else INF

    r_sat = mass.r_outer if q.r_max <= 0 else max(q.r_max, mass.r_outer)
    r_hi = min(R, r_sat)
    r_lo = _low_cutoff(mass, alpha, r_hi, q)

    def integrand(r):
        return r ** (alpha - 1) * psi(r ** (alpha - n) * mass(r))

    head_arg = mass(r_lo) * r_lo ** (alpha - n)
    if isinstance(mass, _GridMass):
        head_arg = min(head_arg,
                       mass.local_value * unit_ball_volume(n) * r_lo ** alpha)
    total = float(psi(head_arg)) * r_lo ** alpha / alpha
    if r_hi > r_lo:
        body, _ = log_midpoint(integrand, r_lo, r_hi, q.nodes_per_decade)
        total += body
    if R > r_sat:
        M = mass.total
        if np.isfinite(R):
            total += adaptive_quad(
                lambda r: r ** (alpha - 1) * psi(M * r ** (alpha - n)),
                r_sat, R, rel_tol=q.tail_tol)
        else:
            val, flag = tail_psi_integral(
                psi, alpha - 1, M, alpha - n, r_sat, rel_tol=q.tail_tol,
                psi_small_exponent=psi.small_exponent(),
                psi_zero_plus=psi.zero_plus_limit())
            if flag == "divergent":
                return INF
            if flag != "ok":
                raise QuadratureError("tail integral did not stabilize")
            total += val
    return total


def wolff_truncated(f, x, params):
    """The R-truncated potential; requires finite R, always finite for
    bounded inputs."""
    if not np.isfinite(params.R):
        raise ValueError("truncated potential needs a finite R")
    return wolff(f, x, params)


def riesz(f, x, alpha, R=INF, quadrature=QuadratureSettings()):
    """Classical potential int_0^R r^(alpha-n-1) ball_mass(f,x,r) dr."""
    n = _input_dim(f)
    if not 0 < alpha < n:
        raise ValueError("need 0 < alpha < n")
    if not R > 0:
        raise ValueError("truncation radius must be positive")
    mass = _mass_profile(f, x)
    if mass.total == 0:
        return 0.0
    r_sat = mass.r_outer
    r_hi = min(R, r_sat)
    r_lo = _low_cutoff(mass, alpha, r_hi, quadrature)

    total = mass(r_lo) * r_lo ** (alpha - n) / alpha
    if isinstance(mass, _GridMass):
        total = min(total,
                    mass.local_value * unit_ball_volume(n) * r_lo ** alpha / alpha)
    if r_hi > r_lo:
        body, _ = log_midpoint(
            lambda r: r ** (alpha - n - 1) * mass(r),
            r_lo, r_hi, quadrature.nodes_per_decade)
        total += body
    if R > r_sat:
        M = mass.total
        if np.isfinite(R):
            total += M * (r_sat ** (alpha - n) - R ** (alpha - n)) / (n - alpha)
        else:
            total += M * r_sat ** (alpha - n) / (n - alpha)
    return total


def riesz_truncated(f, x, R, alpha=1.0, quadrature=QuadratureSettings()):
    if not np.isfinite(R):
        raise ValueError("truncated potential needs a finite R")
    return riesz(f, x, alpha, R=R, quadrature=quadrature)


# -- composition ----------------------------------------------------------------

def _riesz_grid_field(f, alpha, chunk=256):
    """I_alpha|f| at every cell center by direct kernel summation."""
    n = f.dim
    h = f.spacing
    centers = f.cell_centers()
    w = np.abs(f.values).ravel() * f.cell_volume
    rho_h = h * unit_ball_volume(n) ** (-1.0 / n)
    near_kernel = (n * unit_ball_volume(n) * rho_h ** alpha
                   / (alpha * (n - alpha)) / f.cell_volume)
    out = np.empty(centers.shape[0])
    for start in range(0, centers.shape[0], chunk):
        block = centers[start:start + chunk]
        d = np.linalg.norm(block[:, None, :] - centers[None, :, :], axis=2)
        k = np.where(d < h / 2, near_kernel,
                     np.maximum(d, 1e-300) ** (alpha - n) / (n - alpha))
        out[start:start + chunk] = k @ w
    return out


def _radial_field_profile(fn_of_r, r_support, n, count=320, reach=256.0):
    """Sample a decaying radial function and wrap it as a radial lift.

    Each shell carries the sample at its geometric midpoint, so the
    piecewise-constant wrap has no first-order bias for smooth decay.
    """
    wn = unit_ball_volume(n)
    radii = np.unique(np.concatenate([
        np.geomspace(r_support * 1e-4, r_support, count // 2),
        np.geomspace(r_support, reach * r_support, count // 2),
    ]))
    mids = np.concatenate([[radii[0] / 2.0], np.sqrt(radii[1:] * radii[:-1])])
    vals = np.asarray(fn_of_r(mids), dtype=float)
    vals = np.minimum.accumulate(vals)          # enforce the radial decay
    vals = np.maximum(vals, 0.0)
    edges = np.concatenate([[0.0], wn * radii ** n])
    return RadialLift(StepProfile(edges, vals), n)


def havin_mazya(f, x, params):
    """Composed potential: outer Riesz of psi applied to the inner Riesz
    field, both at the same exponent.

    Past any finite sample window the inner field decays like
    mass * r^(alpha-n) / (n-alpha), so the outer integral picks up a tail
    of the form int r^(alpha-1) psi(c r^(alpha-n)) dr.  That tail is added
    in closed form; when it diverges the whole value is infinite.
    """
    alpha, n, psi = params.alpha, params.n, params.psi
    _check_dim(f, n)
    wn = unit_ball_volume(n)
    reach = 256.0

    def far_tail(total_mass, start):
        c_in = total_mass / (n - alpha)
        val, flag = tail_psi_integral(
            psi, alpha - 1, c_in, alpha - n, start,
            rel_tol=params.quadrature.tail_tol,
            psi_small_exponent=psi.small_exponent(),
            psi_zero_plus=psi.zero_plus_limit())
        if flag == "divergent":
            return INF
        if flag != "ok":
            raise QuadratureError("composed tail did not stabilize")
        return n * wn * val / (n - alpha)

    if isinstance(f, GridFunction):
        inner = _riesz_grid_field(f, alpha)
        if not np.all(np.isfinite(inner)):
            return INF
        lo, hi = f.bounds()
        ctr = (lo + hi) / 2.0
        s_in = float(np.min((hi - lo) / 2.0))
        # near field on the grid, cut at the inscribed sphere; everything
        # beyond that radius is covered by the radial far model below
        composed = np.asarray(psi(inner), dtype=float).reshape(f.shape)
        dist = np.linalg.norm(f.cell_centers() - ctr, axis=1).reshape(f.shape)
        box = GridFunction(np.where(dist < s_in, composed, 0.0),
                           f.spacing, f.origin)
        total = riesz(box, x, alpha, quadrature=params.quadrature)

        radii = np.geomspace(s_in, reach * s_in, 200)
        mids = np.sqrt(radii[1:] * radii[:-1])
        samples = np.array([riesz(f, ctr + _axis_point(m, n), alpha)
                            for m in mids])
        vals = np.asarray(psi(samples), dtype=float)
        vals = np.maximum(np.minimum.accumulate(vals), 0.0)
        if vals.size and vals[0] > 0:
            # the shell field (zero inside s_in) is the difference of two
            # monotone profiles; the Riesz integral is linear in the input
            g_full = StepProfile(
                np.concatenate([[0.0], wn * radii[1:] ** n]), vals)
            g_hole = StepProfile([0.0, wn * s_in ** n], [vals[0]])
            total += riesz(RadialLift(g_full, n), x - ctr, alpha,
                           quadrature=params.quadrature)
            total -= riesz(RadialLift(g_hole, n), x - ctr, alpha,
                           quadrature=params.quadrature)
        return total + far_tail(f.total_abs_mass(), reach * s_in)

    if isinstance(f, RadialLift):
        if f.profile.total_mass == 0:
            return 0.0
        rs = f.support_radius
        lifted = _radial_field_profile(
            lambda r: np.array([riesz(f, _axis_point(float(rr), n), alpha)
                                for rr in np.atleast_1d(r)]),
            rs, n, reach=reach)
        composed = RadialLift(
            StepProfile(lifted.profile.edges,
                        psi(lifted.profile.values)), n)
        base = riesz(composed, x, alpha, quadrature=params.quadrature)
        return base + far_tail(f.profile.total_mass, reach * rs)
    raise TypeError("expected GridFunction or RadialLift")


def _axis_point(r, n):
    x = np.zeros(n)
    x[0] = r
    return x


# -- fractional maximal operator ------------------------------------------------

def frac_maximal(f, x, alpha):
    """sup over balls containing x of |B|^(alpha/n - 1) int_B |f|.

    Search over centers on the segment from x toward the mass centroid
    and over radii; a certified lower bound that stabilizes under
    refinement.  Grid cells are charged to the ball of radius
    rho + half the cell diagonal, which contains every counted cell,
    so reported values never exceed the true supremum.
    """
    n = _input_dim(f)
    if not 0 <= alpha < n:
        raise ValueError("need 0 <= alpha < n")
    x = np.asarray(x, dtype=float)
    wn = unit_ball_volume(n)

    if isinstance(f, GridFunction):
        w = np.abs(f.values).ravel()
        if not np.any(w > 0):
            return 0.0
        centers = f.cell_centers()
        centroid = (w @ centers) / w.sum()
    else:
        if f.profile.total_mass == 0:
            return 0.0
        centroid = np.zeros(n)

    direction = centroid - x
    span = float(np.linalg.norm(direction))

    def value_at(c):
        mass = _mass_profile(f, c)
        shift = float(np.linalg.norm(c - x))
        if isinstance(mass, _GridMass):
            # cells counted at center distance rho sit inside the ball of
            # radius rho + delta; scoring that ball keeps the value a true
            # lower bound.  Between jumps the score only decays, so the
            # jump radii are the complete candidate set.
            delta = mass.spacing * math.sqrt(n) / 2.0
            radii = np.unique(mass.dists[mass.weights > 0])
            radii = radii[radii + delta >= shift]
            if radii.size == 0:
                return 0.0, shift
            vals = (wn * (radii + delta) ** n) ** (alpha / n - 1.0) * mass(radii)
            k = int(np.argmax(vals))
            return float(vals[k]), float(radii[k] + delta)
        lo = max(shift, mass.r_outer * 1e-4)
        radii = np.geomspace(max(lo, 1e-12), 1.5 * mass.r_outer + shift, 120)
        vals = (wn * radii ** n) ** (alpha / n - 1.0) * mass(radii)
        k = int(np.argmax(vals))
        # the radial mass is smooth in the radius: zoom locally
        for _ in range(2):
            lo_r = radii[max(k - 1, 0)]
            hi_r = radii[min(k + 1, radii.size - 1)]
            radii = np.linspace(max(lo_r, shift, 1e-12), hi_r, 31)
            vals = (wn * radii ** n) ** (alpha / n - 1.0) * mass(radii)
            k = int(np.argmax(vals))
        return float(vals[k]), float(radii[k])

    taus = np.linspace(0.0, 1.25, 26) if span > 0 else np.array([0.0])
    best = (-1.0, 0.0, 0.0)
    for tau in taus:
        val, r_at = value_at(x + tau * direction)
        if val > best[0]:
            best = (val, tau, r_at)
    # local zoom rounds around the best slice
    for _ in range(3):
        val0, tau0, _ = best
        width = (taus[1] - taus[0]) if taus.size > 1 else 0.0
        local = np.linspace(max(0.0, tau0 - width), tau0 + width, 9) \
            if width > 0 else np.array([tau0])
        for tau in local:
            val, r_at = value_at(x + tau * direction)
            if val > best[0]:
                best = (val, tau, r_at)
        taus = local
    return best[0]


# -- divergence criterion --------------------------------------------------------

def finiteness_check(psi, alpha, n):
    """Tail criterion: whether int^inf psi(t^(1 - n/alpha)) dt converges.

    Returns 'finite', 'infinite', or 'unknown'.  Exact for families with
    known behavior at 0+, probe-based otherwise.
    """
    if not 0 < alpha < n:
        raise ValueError("need 0 < alpha < n")
    decay = 1.0 - n / alpha          # negative
    if psi.sup_value() == 0.0:
        return "finite"
    rho = psi.small_exponent()
    if rho is not None:
        return "finite" if rho * decay < -1.0 else "infinite"
    z = psi.zero_plus_limit()
    if z is not None and z > 0:
        return "infinite"
    if float(psi(1e-12)) == 0.0:
        # psi vanishes on an initial interval, so the integrand is
        # eventually zero
        return "finite"
    probes = [local_exponent(psi, s)[0] for s in (1e-4, 1e-6, 1e-8)]
    stable = [e for e in probes if np.isfinite(e)]
    if len(stable) == 3 and max(stable) - min(stable) < 0.05:
        crit = float(np.median(stable)) * decay
        if crit < -1.05:
            return "finite"
        if crit > -0.95:
            return "infinite"
    return "unknown"


def _input_dim(f):
    if isinstance(f, GridFunction):
        return f.dim
    if isinstance(f, RadialLift):
        return f.n
    raise TypeError("expected GridFunction or RadialLift")


def _check_dim(f, n):
    if _input_dim(f) != n:
        raise ValueError("parameter dimension does not match the input")
