"""Piecewise-C1 curves, immersed 2-disks, and integration of 1- and 2-forms.

Measures (length, area, diameter) and form integrals use composite
Gauss-Legendre quadrature: 16 nodes per segment/axis, panel count doubled
until the relative change drops below 1e-8 (absolute floor 1e-10), at most 6
doublings; non-convergence raises with the last two values attached.

One-form components are grid-sampled fields read through bilinear
interpolation (the native representation for Holder forms); analytic
callables are admitted as exact evaluators for oracles.  A ``None``
component means identically zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .grids import GridField

__all__ = [
    "QuadratureError",
    "Segment",
    "ParamCurve",
    "ParamDisk",
    "OneForm",
    "ChainMeasures",
    "line_segment",
    "arc_segment",
    "polyline",
    "rectangle_boundary",
    "circle",
    "polygon",
    "split_long_segments",
    "rectangle_disk",
    "ellipse_disk",
    "linear_image_disk",
    "curve_length",
    "curve_diameter",
    "disk_area",
    "measure_disk",
    "integrate_one_form",
    "integrate_two_form",
    "exterior_derivative",
    "green_area",
]

QUAD_ORDER = 16
QUAD_REL_TOL = 1e-8
QUAD_ABS_FLOOR = 1e-10
MAX_DOUBLINGS = 6


class QuadratureError(RuntimeError):
    """Adaptive refinement failed to converge; carries the last two values."""

    def __init__(self, last, previous):
        super().__init__(
            f"quadrature did not converge after {MAX_DOUBLINGS} doublings: "
            f"last={last!r}, previous={previous!r}"
        )
        self.last = last
        self.previous = previous


def _panel_nodes(panels: int, order: int = QUAD_ORDER):
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(0.0, 1.0, panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    t = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    wt = (half[:, None] * w[None, :]).ravel()
    return t, wt


def adaptive_quadrature(fn: Callable[[np.ndarray, np.ndarray], float],
                        tol: float = QUAD_REL_TOL):
    """Refine fn(t, w) -> value over [0,1] by doubling the panel count."""
    prev = None
    panels = 1
    for step in range(MAX_DOUBLINGS + 1):
        t, w = _panel_nodes(panels)
        val = fn(t, w)
        if prev is not None:
            if abs(val - prev) <= max(tol * abs(val), QUAD_ABS_FLOOR):
                return val
        if step == MAX_DOUBLINGS:
            raise QuadratureError(val, prev)
        prev = val
        panels *= 2


@dataclass(frozen=True)
class Segment:
    """C1 map [0,1] -> R^2 with a velocity evaluator (both vectorized)."""

    point: Callable[[np.ndarray], np.ndarray]
    velocity: Callable[[np.ndarray], np.ndarray]

    def reversed(self) -> "Segment":
        p, v = self.point, self.velocity
        return Segment(lambda t: p(1.0 - np.asarray(t)),
                       lambda t: -v(1.0 - np.asarray(t)))


def line_segment(a, b) -> Segment:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    d = b - a

    def point(t):
        t = np.asarray(t, dtype=float)
        return a + t[..., None] * d

    def velocity(t):
        t = np.asarray(t, dtype=float)
        return np.broadcast_to(d, t.shape + (2,)).copy()

    return Segment(point, velocity)


def arc_segment(center, radius: float, ang0: float, ang1: float) -> Segment:
    c = np.asarray(center, dtype=float)

    def point(t):
        a = ang0 + (ang1 - ang0) * np.asarray(t, dtype=float)
        return c + radius * np.stack([np.cos(a), np.sin(a)], axis=-1)

    def velocity(t):
        a = ang0 + (ang1 - ang0) * np.asarray(t, dtype=float)
        return radius * (ang1 - ang0) * np.stack([-np.sin(a), np.cos(a)], axis=-1)

    return Segment(point, velocity)


@dataclass(frozen=True)
class ParamCurve:
    """Concatenation of C1 segments; consecutive endpoints must coincide."""

    segments: tuple

    def __post_init__(self):
        segs = tuple(self.segments)
        object.__setattr__(self, "segments", segs)
        one = np.array([1.0])
        zero = np.array([0.0])
        for s0, s1 in zip(segs, segs[1:]):
            gap = np.linalg.norm(s0.point(one)[0] - s1.point(zero)[0])
            if gap > 1e-10:
                raise ValueError(f"segment endpoints do not meet (gap {gap:.3e})")

    def reversed(self) -> "ParamCurve":
        return ParamCurve(tuple(s.reversed() for s in reversed(self.segments)))

    def concat(self, other: "ParamCurve") -> "ParamCurve":
        return ParamCurve(self.segments + other.segments)

    def is_closed(self, tol: float = 1e-10) -> bool:
        a = self.segments[0].point(np.array([0.0]))[0]
        b = self.segments[-1].point(np.array([1.0]))[0]
        return bool(np.linalg.norm(a - b) <= tol)


def polyline(points) -> ParamCurve:
    pts = [np.asarray(p, dtype=float) for p in points]
    return ParamCurve(tuple(line_segment(a, b) for a, b in zip(pts, pts[1:])))


def rectangle_boundary(lo, hi) -> ParamCurve:
    """Positively oriented boundary of [lo0,hi0] x [lo1,hi1]."""
    (x0, y0), (x1, y1) = lo, hi
    return polyline([(x0, y0), (x1, y0), (x1, y1), (x0, y1), (x0, y0)])


def circle(center, radius: float) -> ParamCurve:
    return ParamCurve((arc_segment(center, radius, 0.0, 2.0 * np.pi),))


def polygon(vertices) -> ParamCurve:
    pts = list(vertices) + [vertices[0]]
    return polyline(pts)


def _subdivided(seg: Segment, n: int):
    out = []
    for i in range(n):
        a, width = i / n, 1.0 / n

        def point(t, a=a, width=width):
            return seg.point(a + width * np.asarray(t, dtype=float))

        def velocity(t, a=a, width=width):
            return width * seg.velocity(a + width * np.asarray(t, dtype=float))

        out.append(Segment(point, velocity))
    return out


def split_long_segments(curve: ParamCurve, max_len: float) -> ParamCurve:
    """Subdivide parameters so each piece has chord length <= max_len."""
    segs = []
    for s in curve.segments:
        t = np.linspace(0.0, 1.0, 33)
        pts = s.point(t)
        length = float(np.sum(np.linalg.norm(np.diff(pts, axis=0), axis=1)))
        n = max(1, int(math.ceil(length / max_len)))
        segs.extend(_subdivided(s, n))
    return ParamCurve(tuple(segs))


@dataclass(frozen=True)
class ParamDisk:
    """Immersion psi: [0,1]^2 -> R^2 with partial-velocity evaluators."""

    psi: Callable[[np.ndarray, np.ndarray], np.ndarray]
    d_dr: Callable[[np.ndarray, np.ndarray], np.ndarray]
    d_ds: Callable[[np.ndarray, np.ndarray], np.ndarray]

    def boundary(self) -> ParamCurve:
        """psi restricted to the unit-square boundary, positively oriented."""
        psi, dr, ds = self.psi, self.d_dr, self.d_ds

        def edge(r_of_t, s_of_t, vel):
            def point(t):
                t = np.asarray(t, dtype=float)
                return psi(r_of_t(t), s_of_t(t))
            return Segment(point, vel)

        zeros = lambda t: np.zeros_like(np.asarray(t, dtype=float))
        ones = lambda t: np.ones_like(np.asarray(t, dtype=float))
        ident = lambda t: np.asarray(t, dtype=float)
        rev = lambda t: 1.0 - np.asarray(t, dtype=float)

        bottom = edge(ident, zeros, lambda t: dr(ident(t), zeros(t)))
        right = edge(ones, ident, lambda t: ds(ones(t), ident(t)))
        top = edge(rev, ones, lambda t: -dr(rev(t), ones(t)))
        left = edge(zeros, rev, lambda t: -ds(zeros(t), rev(t)))
        return ParamCurve((bottom, right, top, left))

    def jacobian_det(self, r: np.ndarray, s: np.ndarray) -> np.ndarray:
        a = self.d_dr(r, s)
        b = self.d_ds(r, s)
        return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def rectangle_disk(lo, hi) -> ParamDisk:
    (x0, y0), (x1, y1) = lo, hi
    dx, dy = x1 - x0, y1 - y0

    def psi(r, s):
        r = np.asarray(r, dtype=float)
        s = np.asarray(s, dtype=float)
        return np.stack([x0 + dx * r, y0 + dy * s], axis=-1)

    def d_dr(r, s):
        r = np.asarray(r, dtype=float)
        return np.broadcast_to(np.array([dx, 0.0]), r.shape + (2,)).copy()

    def d_ds(r, s):
        s = np.asarray(s, dtype=float)
        return np.broadcast_to(np.array([0.0, dy]), s.shape + (2,)).copy()

    return ParamDisk(psi, d_dr, d_ds)


def ellipse_disk(center, a: float, b: float) -> ParamDisk:
    """Polar chart of an axis-aligned ellipse; rank 2 away from the center."""
    c = np.asarray(center, dtype=float)
    tau = 2.0 * np.pi

    def psi(r, s):
        r = np.asarray(r, dtype=float)
        s = np.asarray(s, dtype=float)
        return c + np.stack([a * r * np.cos(tau * s), b * r * np.sin(tau * s)],
                            axis=-1)

    def d_dr(r, s):
        s = np.asarray(s, dtype=float)
        return np.stack([a * np.cos(tau * s), b * np.sin(tau * s)], axis=-1)

    def d_ds(r, s):
        r = np.asarray(r, dtype=float)
        s = np.asarray(s, dtype=float)
        return np.stack([-a * tau * r * np.sin(tau * s),
                         b * tau * r * np.cos(tau * s)], axis=-1)

    return ParamDisk(psi, d_dr, d_ds)


def unit_disk(center=(0.0, 0.0), radius: float = 1.0) -> ParamDisk:
    return ellipse_disk(center, radius, radius)


def linear_image_disk(disk: ParamDisk, matrix, shift=(0.0, 0.0)) -> ParamDisk:
    M = np.asarray(matrix, dtype=float)
    b = np.asarray(shift, dtype=float)
    apply = lambda v: v @ M.T
    return ParamDisk(
        lambda r, s: apply(disk.psi(r, s)) + b,
        lambda r, s: apply(disk.d_dr(r, s)),
        lambda r, s: apply(disk.d_ds(r, s)),
    )


@dataclass(frozen=True)
class OneForm:
    """1-form a1 dx + a2 dy; components are GridFields, callables, or None."""

    a1: object
    a2: object
    theta: float

    def __post_init__(self):
        grids = [c for c in (self.a1, self.a2) if isinstance(c, GridField)]
        if len(grids) == 2:
            grids[0]._check_same_grid(grids[1])

    def component(self, i: int, pts: np.ndarray) -> np.ndarray:
        c = self.a1 if i == 0 else self.a2
        if c is None:
            return np.zeros(pts.shape[:-1])
        if isinstance(c, GridField):
            return c.evaluate(pts)
        return np.asarray(c(pts), dtype=float)

    def scaled(self, factor: float) -> "OneForm":
        def scale(c):
            if c is None:
                return None
            if isinstance(c, GridField):
                return c.scaled(factor)
            return lambda pts, c=c: factor * np.asarray(c(pts), dtype=float)
        return OneForm(scale(self.a1), scale(self.a2), self.theta)

    def grid_components(self):
        return [c for c in (self.a1, self.a2) if isinstance(c, GridField)]


@dataclass(frozen=True)
class ChainMeasures:
    length: float
    area: float
    diameter: float

    def __post_init__(self):
        if min(self.length, self.area, self.diameter) < 0.0:
            raise ValueError("measures must be nonnegative")


def _segment_integral(seg: Segment, values_of: Callable, tol: float) -> float:
    def fn(t, w):
        return float(np.sum(w * values_of(seg, t)))
    return adaptive_quadrature(fn, tol=tol)


def curve_length(curve: ParamCurve, tol: float = QUAD_REL_TOL) -> float:
    def speed(seg, t):
        return np.linalg.norm(seg.velocity(t), axis=-1)
    return sum(_segment_integral(s, speed, tol) for s in curve.segments)


def curve_diameter(curve: ParamCurve, samples_per_segment: int = 128) -> float:
    """Max pairwise distance over boundary sample nodes (flat metric).

    Two-stage: a coarse pass locates the maximizing pair of parameters, a
    dense local pass around that pair sharpens the estimate.  The result is
    a lower bound for the continuous diameter (conservative for the
    smallness filter).
    """
    t = np.linspace(0.0, 1.0, samples_per_segment)
    pts = np.concatenate([s.point(t) for s in curve.segments], axis=0)
    n = len(pts)
    best = 0.0
    best_pair = (0, 0)
    for start in range(0, n, 512):
        chunk = pts[start:start + 512]
        d = np.linalg.norm(chunk[:, None, :] - pts[None, :, :], axis=-1)
        i, j = np.unravel_index(np.argmax(d), d.shape)
        if d[i, j] > best:
            best = float(d[i, j])
            best_pair = (start + i, j)
    # refine around the coarse maximizer
    def local(idx):
        seg = curve.segments[idx // samples_per_segment]
        t0 = t[idx % samples_per_segment]
        window = 2.0 / (samples_per_segment - 1)
        tt = np.clip(np.linspace(t0 - window, t0 + window, 192), 0.0, 1.0)
        return seg.point(tt)

    a = local(best_pair[0])
    b = local(best_pair[1])
    d = np.linalg.norm(a[:, None, :] - b[None, :, :], axis=-1)
    return max(best, float(np.max(d)))


def _tensor_quadrature(fn: Callable, tol: float = QUAD_REL_TOL) -> float:
    prev = None
    panels = 1
    for step in range(MAX_DOUBLINGS + 1):
        t, w = _panel_nodes(panels)
        r = np.broadcast_to(t[:, None], (t.size, t.size))
        s = np.broadcast_to(t[None, :], (t.size, t.size))
        ww = w[:, None] * w[None, :]
        val = float(np.sum(ww * fn(r, s)))
        if prev is not None and abs(val - prev) <= max(tol * abs(val),
                                                       QUAD_ABS_FLOOR):
            return val
        if step == MAX_DOUBLINGS:
            raise QuadratureError(val, prev)
        prev = val
        panels *= 2


def disk_area(disk: ParamDisk, tol: float = QUAD_REL_TOL) -> float:
    return _tensor_quadrature(lambda r, s: np.abs(disk.jacobian_det(r, s)), tol)


def measure_disk(disk: ParamDisk, tol: float = QUAD_REL_TOL) -> ChainMeasures:
    bnd = disk.boundary()
    return ChainMeasures(
        length=curve_length(bnd, tol),
        area=disk_area(disk, tol),
        diameter=curve_diameter(bnd),
    )


def integrate_one_form(alpha: OneForm, curve: ParamCurve,
                       tol: float = QUAD_REL_TOL) -> float:
    """Sum over segments of int_0^1 a(gamma(t)) . gamma'(t) dt."""
    def pull(seg, t):
        pts = seg.point(t)
        vel = seg.velocity(t)
        return (alpha.component(0, pts) * vel[..., 0]
                + alpha.component(1, pts) * vel[..., 1])
    return sum(_segment_integral(s, pull, tol) for s in curve.segments)


def integrate_two_form(beta, disk: ParamDisk, tol: float = QUAD_REL_TOL) -> float:
    """int int beta(psi(r,s)) det J_psi dr ds (beta: GridField or callable)."""
    def fn(r, s):
        pts = disk.psi(r, s)
        if isinstance(beta, GridField):
            b = beta.evaluate(pts)
        else:
            b = np.asarray(beta(pts), dtype=float)
        return b * disk.jacobian_det(r, s)
    return _tensor_quadrature(fn, tol)


def _centered_diff(values: np.ndarray, ax: int, h: float, periodic: bool):
    if periodic:
        n = values.shape[ax]
        core = np.take(values, range(n - 1), axis=ax)
        d = (np.roll(core, -1, axis=ax) - np.roll(core, 1, axis=ax)) / (2 * h)
        edge = np.take(d, [0], axis=ax)
        return np.concatenate([d, edge], axis=ax)
    d = np.gradient(values, h, axis=ax, edge_order=2)
    return d


def exterior_derivative(alpha: OneForm) -> GridField:
    """d alpha = (da2/dx - da1/dy) by centered differences on the grid.

    Caller contract: only mollified or otherwise smooth-at-grid-scale forms.
    """
    grids = alpha.grid_components()
    if not grids:
        raise ValueError("exterior_derivative needs at least one grid component")
    ref = grids[0]
    if ref.dim != 2:
        raise ValueError("exterior derivative is implemented for 2D forms")
    out = np.zeros(ref.resolution)
    if isinstance(alpha.a2, GridField):
        out += _centered_diff(alpha.a2.values, 0, ref.spacing[0], ref.periodic[0])
    elif alpha.a2 is not None:
        raise ValueError("analytic components have no sampled derivative")
    if isinstance(alpha.a1, GridField):
        out -= _centered_diff(alpha.a1.values, 1, ref.spacing[1], ref.periodic[1])
    elif alpha.a1 is not None:
        raise ValueError("analytic components have no sampled derivative")
    return GridField(ref.lo, ref.hi, ref.resolution, ref.periodic, out)


def green_area(curve: ParamCurve, tol: float = QUAD_REL_TOL) -> float:
    """Signed area of a closed curve via 0.5 * integral (x dy - y dx)."""
    if not curve.is_closed():
        raise ValueError("green_area needs a closed curve")
    half_xdy = OneForm(lambda p: -0.5 * p[..., 1], lambda p: 0.5 * p[..., 0], 1.0)
    return integrate_one_form(half_xdy, curve, tol)
