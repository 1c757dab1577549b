"""Sampled scalar fields on boxes and flat tori.

A :class:`GridField` stores uniform samples of a scalar function on an
axis-aligned box (dimension 1 or 2), with per-axis periodicity.  Values
between nodes are obtained by bilinear interpolation, which keeps every
Lipschitz estimate conservative (interpolation never increases the cellwise
Lipschitz constant).

Holder seminorms are estimated over sampled node pairs, so they are *lower*
bounds for the true supremum; callers that need upper bounds multiply by a
declared slack factor (default 1.05).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "GridField",
    "HolderEstimate",
    "UnderResolvedError",
    "make_weierstrass",
    "weierstrass_callable",
    "holder_seminorm",
    "c_theta_norm",
    "extend_constant_y",
    "save_csv",
    "load_csv",
]

DEFAULT_SLACK = 1.05
MAX_ALL_PAIR_NODES = 4096  # 2^12: all pairs below this, seeded subsample above


class UnderResolvedError(ValueError):
    """Requested resolution cannot resolve the finest feature."""


def _as_tuple(x, dim, cast):
    if np.isscalar(x):
        return (cast(x),) * dim
    t = tuple(cast(v) for v in x)
    if len(t) != dim:
        raise ValueError(f"expected {dim} entries, got {len(t)}")
    return t


@dataclass(frozen=True)
class GridField:
    """Uniformly sampled scalar function on a box, bilinear between nodes.

    ``values`` has shape ``resolution`` (axis 0 is the first coordinate).
    Periodic axes must satisfy ``value(lo) == value(hi)`` at matching nodes;
    the duplicate boundary node is stored explicitly.
    """

    lo: tuple
    hi: tuple
    resolution: tuple
    periodic: tuple
    values: np.ndarray

    def __post_init__(self):
        dim = len(self.resolution)
        if dim not in (1, 2):
            raise ValueError("only dimensions 1 and 2 are supported")
        if any(r < 2 for r in self.resolution):
            raise ValueError("resolution must be >= 2 per axis")
        v = np.asarray(self.values, dtype=float)
        if v.shape != tuple(self.resolution):
            raise ValueError(f"values shape {v.shape} != resolution {self.resolution}")
        if not np.all(np.isfinite(v)):
            raise ValueError("values must be finite")
        object.__setattr__(self, "values", v)
        for ax in range(dim):
            if self.hi[ax] <= self.lo[ax]:
                raise ValueError("domain must have positive extent")
            if self.periodic[ax]:
                first = np.take(v, 0, axis=ax)
                last = np.take(v, self.resolution[ax] - 1, axis=ax)
                if not np.allclose(first, last, atol=1e-10, rtol=0.0):
                    raise ValueError(f"periodic axis {ax}: endpoint values differ")

    @property
    def dim(self) -> int:
        return len(self.resolution)

    @property
    def spacing(self) -> tuple:
        return tuple(
            (self.hi[a] - self.lo[a]) / (self.resolution[a] - 1)
            for a in range(self.dim)
        )

    def axis_nodes(self, ax: int) -> np.ndarray:
        return np.linspace(self.lo[ax], self.hi[ax], self.resolution[ax])

    def node_coords(self) -> np.ndarray:
        """All node coordinates, shape (n_nodes, dim)."""
        axes = [self.axis_nodes(a) for a in range(self.dim)]
        if self.dim == 1:
            return axes[0][:, None]
        gx, gy = np.meshgrid(axes[0], axes[1], indexing="ij")
        return np.stack([gx.ravel(), gy.ravel()], axis=1)

    def _axis_index(self, ax: int, x: np.ndarray):
        lo, hi = self.lo[ax], self.hi[ax]
        n = self.resolution[ax]
        h = (hi - lo) / (n - 1)
        t = (x - lo) / h
        if self.periodic[ax]:
            t = np.mod(t, n - 1)
        else:
            # tolerate roundoff just outside the box
            eps = 1e-9 * (n - 1)
            if np.any(t < -eps) or np.any(t > n - 1 + eps):
                raise ValueError(f"coordinates exit domain on axis {ax}")
            t = np.clip(t, 0.0, n - 1)
        i = np.minimum(t.astype(int), n - 2)
        return i, t - i

    def evaluate(self, pts) -> np.ndarray:
        """Interpolate at points of shape (..., dim) (or (...,) in 1D)."""
        pts = np.asarray(pts, dtype=float)
        if self.dim == 1:
            # accept plain coordinate arrays or (..., 1)-shaped points
            x = pts[..., 0] if pts.ndim >= 2 and pts.shape[-1] == 1 else pts
            i, f = self._axis_index(0, x)
            return (1.0 - f) * self.values[i] + f * self.values[i + 1]
        i, fx = self._axis_index(0, pts[..., 0])
        j, fy = self._axis_index(1, pts[..., 1])
        v = self.values
        return (
            (1 - fx) * (1 - fy) * v[i, j]
            + fx * (1 - fy) * v[i + 1, j]
            + (1 - fx) * fy * v[i, j + 1]
            + fx * fy * v[i + 1, j + 1]
        )

    def __call__(self, pts) -> np.ndarray:
        return self.evaluate(pts)

    def supnorm(self) -> float:
        return float(np.max(np.abs(self.values)))

    def scaled(self, c: float) -> "GridField":
        return GridField(self.lo, self.hi, self.resolution, self.periodic,
                         c * self.values)

    def __add__(self, other: "GridField") -> "GridField":
        self._check_same_grid(other)
        return GridField(self.lo, self.hi, self.resolution, self.periodic,
                         self.values + other.values)

    def __sub__(self, other: "GridField") -> "GridField":
        self._check_same_grid(other)
        return GridField(self.lo, self.hi, self.resolution, self.periodic,
                         self.values - other.values)

    def _check_same_grid(self, other: "GridField"):
        if (self.lo, self.hi, self.resolution, self.periodic) != (
            other.lo, other.hi, other.resolution, other.periodic
        ):
            raise ValueError("grids do not match")

    def distance(self, p: np.ndarray, q: np.ndarray) -> np.ndarray:
        """Flat metric of the domain; periodic axes use the shortest wrap."""
        p = np.atleast_2d(p)
        q = np.atleast_2d(q)
        d2 = np.zeros(np.broadcast_shapes(p.shape[:-1], q.shape[:-1]))
        for ax in range(self.dim):
            dx = np.abs(p[..., ax] - q[..., ax])
            if self.periodic[ax]:
                period = self.hi[ax] - self.lo[ax]
                dx = np.minimum(dx, period - dx)
            d2 = d2 + dx * dx
        return np.sqrt(d2)

    @classmethod
    def from_function(cls, fn: Callable, lo, hi, resolution, periodic) -> "GridField":
        if np.isscalar(resolution):
            dim = 1
        else:
            dim = len(resolution)
        lo = _as_tuple(lo, dim, float)
        hi = _as_tuple(hi, dim, float)
        resolution = _as_tuple(resolution, dim, int)
        periodic = _as_tuple(periodic, dim, bool)
        axes = [np.linspace(lo[a], hi[a], resolution[a]) for a in range(dim)]
        if dim == 1:
            vals = np.asarray(fn(axes[0]), dtype=float)
        else:
            gx, gy = np.meshgrid(axes[0], axes[1], indexing="ij")
            vals = np.asarray(fn(gx, gy), dtype=float)
        # snap periodic endpoints: fn may miss exact equality by roundoff
        for ax in range(dim):
            if periodic[ax]:
                idx_first = [slice(None)] * dim
                idx_last = [slice(None)] * dim
                idx_first[ax] = 0
                idx_last[ax] = resolution[ax] - 1
                vals[tuple(idx_last)] = vals[tuple(idx_first)]
        return cls(lo, hi, resolution, periodic, vals)


@dataclass(frozen=True)
class HolderEstimate:
    """Sampled-pair estimate of sup|f| and the theta-Holder seminorm.

    ``seminorm`` is a lower bound for the true seminorm (pairs only);
    ``cnorm == supnorm + seminorm`` exactly.
    """

    theta: float
    seminorm: float
    supnorm: float

    @property
    def cnorm(self) -> float:
        return self.supnorm + self.seminorm


def weierstrass_callable(theta: float, base: int, terms: int) -> Callable:
    """Partial Weierstrass sum W(x) = sum_k base^(-theta k) cos(2 pi base^k x)."""
    if not 0.0 < theta < 1.0:
        raise ValueError("theta must be in (0,1)")
    if base < 2 or terms < 1:
        raise ValueError("need base >= 2 and terms >= 1")
    amps = np.array([float(base) ** (-theta * k) for k in range(terms)])
    freqs = np.array([float(base) ** k for k in range(terms)])

    def w(x):
        x = np.asarray(x, dtype=float)
        return np.sum(
            amps * np.cos(2.0 * np.pi * freqs * x[..., None]), axis=-1
        )

    return w


def make_weierstrass(theta: float, base: int, terms: int, resolution: int) -> GridField:
    """Reference C^theta-rough test function on [0,1], periodic.

    The grid must resolve the finest oscillation: resolution >= 4 * base^(terms-1).
    """
    finest = base ** (terms - 1)
    if resolution < 4 * finest:
        raise UnderResolvedError(
            f"resolution {resolution} < 4*base^(terms-1) = {4 * finest}; "
            "the finest oscillation would be aliased"
        )
    w = weierstrass_callable(theta, base, terms)
    return GridField.from_function(w, 0.0, 1.0, resolution, True)


def _select_nodes(f: GridField, seed: int, max_nodes: int):
    coords = f.node_coords()
    vals = f.values.ravel()
    n = coords.shape[0]
    if n <= max_nodes:
        return coords, vals
    # Seeded uniform subsample; with thousands of nodes it populates every
    # dyadic-distance stratum of the domain.
    rng = np.random.default_rng(seed)
    idx = np.sort(rng.choice(n, size=max_nodes, replace=False))
    return coords[idx], vals[idx]


def _max_quotient(f: GridField, coords, vals, theta: float, chunk: int = 512) -> float:
    best = 0.0
    n = coords.shape[0]
    for start in range(0, n, chunk):
        p = coords[start:start + chunk]
        d = f.distance(p[:, None, :], coords[None, :, :])
        diff = np.abs(vals[start:start + chunk, None] - vals[None, :])
        with np.errstate(divide="ignore", invalid="ignore"):
            q = diff / d ** theta
        q[d == 0.0] = 0.0
        m = float(np.max(q)) if q.size else 0.0
        if m > best:
            best = m
    return best


def holder_seminorm(
    f: GridField,
    theta: float,
    seed: int = 0,
    max_nodes: int = MAX_ALL_PAIR_NODES,
    pairs=None,
) -> HolderEstimate:
    """Estimate H_theta(f) = sup |f(x)-f(y)| / d(x,y)^theta over sampled pairs.

    All node pairs when the grid has at most ``max_nodes`` nodes, otherwise
    all pairs of a seeded random subsample.  An explicit ``pairs`` array
    (shape (m, 2) of flat node indices) overrides both, which makes the
    monotonicity-under-refinement property directly testable.
    """
    if not 0.0 < theta <= 1.0:
        raise ValueError("theta must be in (0,1]")
    sup = f.supnorm()
    if pairs is not None:
        coords = f.node_coords()
        vals = f.values.ravel()
        p, q = coords[pairs[:, 0]], coords[pairs[:, 1]]
        d = f.distance(p, q)
        diff = np.abs(vals[pairs[:, 0]] - vals[pairs[:, 1]])
        mask = d > 0.0
        semi = float(np.max(diff[mask] / d[mask] ** theta)) if np.any(mask) else 0.0
        return HolderEstimate(theta, semi, sup)
    coords, vals = _select_nodes(f, seed, max_nodes)
    semi = _max_quotient(f, coords, vals, theta)
    return HolderEstimate(theta, semi, sup)


def c_theta_norm(f: GridField, theta: float, seed: int = 0,
                 max_nodes: int = MAX_ALL_PAIR_NODES) -> HolderEstimate:
    """sup|f| + estimated theta-seminorm (same pair policy as holder_seminorm)."""
    return holder_seminorm(f, theta, seed=seed, max_nodes=max_nodes)


def extend_constant_y(f: GridField, ny: int, lo: float = 0.0, hi: float = 1.0,
                      periodic: bool = True) -> GridField:
    """Extend a 1D field to 2D, constant in the second coordinate."""
    if f.dim != 1:
        raise ValueError("expected a 1D field")
    vals = np.repeat(f.values[:, None], ny, axis=1)
    return GridField(
        (f.lo[0], lo), (f.hi[0], hi), (f.resolution[0], ny),
        (f.periodic[0], periodic), vals,
    )


# --- CSV import/export -----------------------------------------------------
#
# Header line:  # dim,resolution,lo,hi,periodic
# with multi-axis entries joined by ';', followed by row-major samples,
# one per line, 17 significant digits.

def save_csv(f: GridField, path) -> None:
    with open(path, "w") as fh:
        res = ";".join(str(r) for r in f.resolution)
        lo = ";".join(f"{v:.17g}" for v in f.lo)
        hi = ";".join(f"{v:.17g}" for v in f.hi)
        per = ";".join(str(int(p)) for p in f.periodic)
        fh.write("# dim,resolution,lo,hi,periodic\n")
        fh.write(f"# {f.dim},{res},{lo},{hi},{per}\n")
        for v in f.values.ravel():
            fh.write(f"{v:.17g}\n")


def load_csv(path) -> GridField:
    with open(path) as fh:
        header = fh.readline()
        if not header.startswith("#"):
            raise ValueError("missing GridField CSV header")
        meta = fh.readline().lstrip("#").strip().split(",")
        dim = int(meta[0])
        res = tuple(int(x) for x in meta[1].split(";"))
        lo = tuple(float(x) for x in meta[2].split(";"))
        hi = tuple(float(x) for x in meta[3].split(";"))
        per = tuple(bool(int(x)) for x in meta[4].split(";"))
        vals = np.array([float(line) for line in fh if line.strip()])
    return GridField(lo, hi, res, per, vals.reshape(res))
