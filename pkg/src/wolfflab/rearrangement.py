"""Distribution functions, rearrangements, and radial lifts.

StepProfile is the canonical one-dimensional representation: every norm
and reduction operator in the package consumes it, because integrals
against a right-continuous non-increasing step function have closed
forms.  GridFunction carries sampled data on a uniform Cartesian grid
with cell-center semantics; its superlevel-set measures are exact cell
counts times the cell volume.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import gamma as _gamma


def unit_ball_volume(n):
    """Volume of the unit ball in R^n."""
    if n < 1:
        raise ValueError("dimension must be >= 1")
    return float(np.pi ** (n / 2.0) / _gamma(n / 2.0 + 1.0))


class StepProfile:
    """Right-continuous, non-increasing, compactly supported step function.

    Value is values[k] on [edges[k], edges[k+1]) and 0 beyond the last
    edge.  Adjacent equal values are merged eagerly and trailing zeros
    dropped, so the representation is canonical: two profiles are equal
    as functions iff their arrays match.
    """

    __slots__ = ("edges", "values", "_cum")

    def __init__(self, edges, values):
        edges = np.asarray(edges, dtype=float)
        values = np.asarray(values, dtype=float)
        if edges.ndim != 1 or values.ndim != 1 or edges.size != values.size + 1:
            raise ValueError("need len(edges) == len(values) + 1")
        if edges.size == 0 or edges[0] != 0.0:
            raise ValueError("edges must start at 0")
        if np.any(np.diff(edges) <= 0):
            raise ValueError("edges must be strictly increasing")
        if np.any(values < 0):
            raise ValueError("values must be nonnegative")
        if np.any(np.diff(values) > 0):
            raise ValueError("values must be non-increasing")
        # Canonical form: merge equal-value runs, drop the zero tail.
        keep = np.ones(values.size, dtype=bool)
        keep[1:] = values[1:] != values[:-1]
        starts = edges[:-1][keep]
        vals = values[keep]
        nz = vals > 0
        starts, vals = starts[nz], vals[nz]
        if vals.size == 0:
            self.edges = np.zeros(1)
            self.values = np.zeros(0)
        else:
            # The right end of each kept run is the next kept start, and the
            # final right end is the original support end (or the start of
            # the dropped zero tail).
            tail_idx = np.argmax(values == 0.0) if np.any(values == 0.0) else None
            end = edges[tail_idx] if tail_idx is not None else edges[-1]
            self.edges = np.concatenate([starts, [end]])
            self.values = vals
        widths = np.diff(self.edges)
        self._cum = np.concatenate([[0.0], np.cumsum(widths * self.values)])

    @classmethod
    def zero(cls):
        return cls([0.0], [])

    @classmethod
    def constant(cls, value, width):
        if value <= 0 or width <= 0:
            return cls.zero()
        return cls([0.0, float(width)], [float(value)])

    @classmethod
    def from_values(cls, values, width):
        """Equal-width steps: values[k] on [k*width, (k+1)*width)."""
        values = np.asarray(values, dtype=float)
        edges = np.arange(values.size + 1) * float(width)
        return cls(edges, values)

    # -- basic queries -------------------------------------------------------

    @property
    def support_measure(self):
        return float(self.edges[-1]) if self.values.size else 0.0

    @property
    def total_mass(self):
        return float(self._cum[-1])

    def __call__(self, t):
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        if np.any(t_arr < 0):
            raise ValueError("profiles live on [0, inf)")
        idx = np.searchsorted(self.edges, t_arr, side="right") - 1
        out = np.zeros_like(t_arr)
        inside = idx < self.values.size
        if self.values.size:
            out[inside] = self.values[idx[inside]]
        return out if np.ndim(t) else float(out[0])

    def cumint(self, t):
        """Exact int_0^t of the profile."""
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        if np.any(t_arr < 0):
            raise ValueError("profiles live on [0, inf)")
        idx = np.clip(np.searchsorted(self.edges, t_arr, side="right") - 1,
                      0, max(self.values.size - 1, 0))
        out = np.full_like(t_arr, self.total_mass)
        if self.values.size:
            inside = t_arr < self.edges[-1]
            out[inside] = (self._cum[idx[inside]]
                           + self.values[idx[inside]]
                           * (t_arr[inside] - self.edges[idx[inside]]))
        return out if np.ndim(t) else float(out[0])

    def integral(self, a, b):
        return self.cumint(b) - self.cumint(a)

    def maximal(self, t):
        """f**(t) = (1/t) int_0^t f*; f**(0) = f*(0)."""
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        if np.any(t_arr < 0):
            raise ValueError("profiles live on [0, inf)")
        top = float(self.values[0]) if self.values.size else 0.0
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(t_arr > 0, self.cumint(t_arr) / t_arr, top)
        return out if np.ndim(t) else float(out[0])

    def distribution(self, lam):
        """|{f* > lam}| by breakpoint arithmetic."""
        if lam < 0:
            raise ValueError("level must be nonnegative")
        count = int(np.sum(self.values > lam))
        return float(self.edges[count])

    def scale(self, c):
        if c < 0:
            raise ValueError("scale factor must be nonnegative")
        if c == 0 or self.values.size == 0:
            return StepProfile.zero()
        return StepProfile(self.edges, c * self.values)

    def restrict(self, measure):
        """The profile cut off to [0, measure)."""
        if measure <= 0:
            return StepProfile.zero()
        if measure >= self.support_measure:
            return self
        cut = np.searchsorted(self.edges, measure, side="left")
        edges = np.concatenate([self.edges[:cut], [measure]])
        return StepProfile(edges, self.values[:cut])

    def __eq__(self, other):
        if not isinstance(other, StepProfile):
            return NotImplemented
        return (np.array_equal(self.edges, other.edges)
                and np.array_equal(self.values, other.values))

    def __hash__(self):
        return hash((self.edges.tobytes(), self.values.tobytes()))

    def __repr__(self):
        return "StepProfile(m=%d, support=%g, mass=%g)" % (
            self.values.size, self.support_measure, self.total_mass)

    # -- CSV ------------------------------------------------------------------

    def to_csv(self, path_or_buf):
        """Two columns t,v: breakpoint and value on the following interval.

        A final row with value 0 closes the support.
        """
        rows = ["t,v"]
        for k in range(self.values.size):
            rows.append("%.17g,%.17g" % (self.edges[k], self.values[k]))
        rows.append("%.17g,0" % (self.edges[-1],))
        text = "\n".join(rows) + "\n"
        if hasattr(path_or_buf, "write"):
            path_or_buf.write(text)
        else:
            with open(path_or_buf, "w") as fh:
                fh.write(text)

    @classmethod
    def from_csv(cls, path_or_buf):
        if hasattr(path_or_buf, "read"):
            lines = path_or_buf.read().splitlines()
        else:
            with open(path_or_buf) as fh:
                lines = fh.read().splitlines()
        lines = [ln.strip() for ln in lines if ln.strip()]
        if not lines or lines[0].replace(" ", "") != "t,v":
            raise ValueError("profile CSV needs a 't,v' header")
        data = np.array([[float(x) for x in ln.split(",")] for ln in lines[1:]])
        if data.size == 0:
            return cls.zero()
        t, v = data[:, 0], data[:, 1]
        if v[-1] != 0.0:
            raise ValueError("profile CSV must close its support with v=0")
        # Rows are (t_{k-1}, v_k) with a closing (t_m, 0) row, so the first
        # column already lists every edge.
        return cls(t, v[:-1])


class GridFunction:
    """Sampled function on a uniform Cartesian grid, n in {1, 2, 3}.

    values[i, j, ...] is the constant cell value on the cell whose center
    is origin + (index + 1/2) * spacing.  Values may be signed; every
    consumer that needs |f| takes absolute values itself.
    """

    __slots__ = ("dim", "shape", "spacing", "origin", "values")

    def __init__(self, values, spacing, origin=None):
        values = np.asarray(values, dtype=float)
        if values.ndim not in (1, 2, 3):
            raise ValueError("grid dimension must be 1, 2, or 3")
        if spacing <= 0:
            raise ValueError("spacing must be positive")
        self.dim = values.ndim
        self.shape = values.shape
        self.spacing = float(spacing)
        self.origin = (np.zeros(self.dim) if origin is None
                       else np.asarray(origin, dtype=float))
        if self.origin.shape != (self.dim,):
            raise ValueError("origin length must match dimension")
        self.values = values

    @classmethod
    def from_callable(cls, fn, shape, spacing, origin=None):
        shape = tuple(shape)
        origin_arr = np.zeros(len(shape)) if origin is None else np.asarray(
            origin, dtype=float)
        axes = [origin_arr[d] + (np.arange(shape[d]) + 0.5) * spacing
                for d in range(len(shape))]
        mesh = np.meshgrid(*axes, indexing="ij")
        pts = np.stack([m.ravel() for m in mesh], axis=-1)
        vals = np.asarray(fn(pts), dtype=float).reshape(shape)
        return cls(vals, spacing, origin_arr)

    @property
    def cell_volume(self):
        return self.spacing ** self.dim

    def cell_centers(self):
        axes = [self.origin[d] + (np.arange(self.shape[d]) + 0.5) * self.spacing
                for d in range(self.dim)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    def total_abs_mass(self):
        return float(np.sum(np.abs(self.values)) * self.cell_volume)

    def bounds(self):
        """(lower corner, upper corner) of the grid window."""
        upper = self.origin + np.asarray(self.shape) * self.spacing
        return self.origin.copy(), upper

    def to_csv(self, path_or_buf):
        head = [str(self.dim)] + [str(s) for s in self.shape] + [
            "%.17g" % self.spacing] + ["%.17g" % o for o in self.origin]
        body = "\n".join("%.17g" % v for v in self.values.ravel())
        text = ",".join(head) + "\n" + body + "\n"
        if hasattr(path_or_buf, "write"):
            path_or_buf.write(text)
        else:
            with open(path_or_buf, "w") as fh:
                fh.write(text)

    @classmethod
    def from_csv(cls, path_or_buf):
        if hasattr(path_or_buf, "read"):
            content = path_or_buf.read()
        else:
            with open(path_or_buf) as fh:
                content = fh.read()
        lines = [ln.strip() for ln in content.splitlines() if ln.strip()]
        head = lines[0].split(",")
        dim = int(head[0])
        shape = tuple(int(x) for x in head[1:1 + dim])
        spacing = float(head[1 + dim])
        origin = np.array([float(x) for x in head[2 + dim:2 + 2 * dim]])
        if len(head) != 2 + 2 * dim:
            raise ValueError("grid CSV header must be dim,shape...,spacing,origin...")
        flat = np.array([float(x) for ln in lines[1:] for x in ln.split(",")])
        if flat.size != int(np.prod(shape)):
            raise ValueError("grid CSV value count does not match the shape")
        return cls(flat.reshape(shape), spacing, origin)


@dataclass(frozen=True)
class RadialLift:
    """Radially decreasing function on R^n with f(x) = profile(omega_n |x|^n).

    Its decreasing rearrangement is exactly the underlying profile, and
    int_{B(0,r)} f = cumint(omega_n r^n).
    """

    profile: StepProfile
    n: int

    @property
    def support_radius(self):
        t = self.profile.support_measure
        return (t / unit_ball_volume(self.n)) ** (1.0 / self.n) if t else 0.0

    def level_radii(self):
        """Radii of the superlevel balls, one per profile step edge."""
        wn = unit_ball_volume(self.n)
        return (self.profile.edges[1:] / wn) ** (1.0 / self.n)

    def at_radius(self, r):
        r_arr = np.atleast_1d(np.asarray(r, dtype=float))
        vals = self.profile(unit_ball_volume(self.n) * r_arr ** self.n)
        return vals if np.ndim(r) else float(vals[0])

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        vals = self.at_radius(np.linalg.norm(np.atleast_2d(x), axis=-1))
        return float(vals[0]) if single else vals

    def ball_integral(self, r):
        """int_{B(0,r)} f, exactly."""
        return self.profile.cumint(unit_ball_volume(self.n) * float(r) ** self.n)

    def to_grid(self, shape, spacing, origin=None):
        return GridFunction.from_callable(
            lambda pts: self.at_radius(np.linalg.norm(pts, axis=1)),
            shape, spacing, origin)


# -- operations ----------------------------------------------------------------

def distribution_function(f, lam):
    """|{ |f| > lam }|, exact for both representations."""
    if lam < 0:
        raise ValueError("level must be nonnegative")
    if isinstance(f, StepProfile):
        return f.distribution(lam)
    if isinstance(f, GridFunction):
        return float(np.sum(np.abs(f.values) > lam)) * f.cell_volume
    raise TypeError("expected StepProfile or GridFunction")


def decreasing_rearrangement(f):
    """f* as a StepProfile: sorted |cell values| with widths h^n."""
    if isinstance(f, StepProfile):
        return f
    if not isinstance(f, GridFunction):
        raise TypeError("expected StepProfile or GridFunction")
    flat = np.sort(np.abs(f.values).ravel())[::-1]
    flat = flat[flat > 0]
    if flat.size == 0:
        return StepProfile.zero()
    return StepProfile.from_values(flat, f.cell_volume)


def maximal_rearrangement(p, t):
    """f**(t) for a StepProfile, exact piecewise-rational evaluation."""
    return p.maximal(t)


def psi_rearrangement(p, psi):
    """(psi(|f|))* computed as psi applied to the profile steps.

    Requires psi(0) = 0; otherwise psi(|f|) is bounded away from zero on
    the whole space and its rearrangement has no compact support.
    """
    if psi(0.0) != 0.0:
        raise ValueError("psi(0) must be 0 to keep the rearrangement "
                         "compactly supported")
    if p.values.size == 0:
        return StepProfile.zero()
    return StepProfile(p.edges, psi(p.values))


def radial_lift(p, n):
    """The radially decreasing representative with rearrangement p."""
    if n not in (1, 2, 3):
        raise ValueError("radial lifts support n in {1, 2, 3}")
    return RadialLift(profile=p, n=n)
