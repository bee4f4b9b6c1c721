"""Piecewise-linear grid surfaces and self-maps of the unit square.

Both :class:`GridSurface` and :class:`GridMap` live on a uniform grid of the
unit square whose cells are split by the diagonal from the lower-left to the
upper-right corner. Vertex ``(i, j)`` sits at ``(i/k, j/k)`` and is stored at
index ``j*(k+1) + i`` (row-major, x fastest).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterator, List, Sequence, Tuple, Union

from . import geometry as geo
from .scalar import (
    Euclidean,
    MaxNorm,
    MetricSpace,
    Table,
    as_rat,
    ceil_log2,
    format_rat,
    sqrt_enclosure,
)

Pt = Tuple[Fraction, Fraction]
Vec = Tuple[Fraction, ...]

HALF = Fraction(1, 2)
CENTRE: Pt = (HALF, HALF)


def vertex_index(k: int, i: int, j: int) -> int:
    return j * (k + 1) + i


def grid_vertices(k: int) -> List[Pt]:
    return [(Fraction(i, k), Fraction(j, k)) for j in range(k + 1) for i in range(k + 1)]


@dataclass(frozen=True)
class Tri:
    """One triangle of the grid triangulation: cell ``(i, j)``, lower or upper half.

    ``verts`` are vertex indices in counter-clockwise order, starting at the
    cell's lower-left corner.
    """

    i: int
    j: int
    upper: bool
    verts: Tuple[int, int, int]


def triangles(k: int) -> List[Tri]:
    out = []
    for j in range(k):
        for i in range(k):
            v00 = vertex_index(k, i, j)
            v10 = vertex_index(k, i + 1, j)
            v11 = vertex_index(k, i + 1, j + 1)
            v01 = vertex_index(k, i, j + 1)
            out.append(Tri(i, j, False, (v00, v10, v11)))
            out.append(Tri(i, j, True, (v00, v11, v01)))
    return out


def locate(k: int, x: Pt) -> Tri:
    """The triangle containing ``x`` (lower triangle on the diagonal)."""
    px, py = x
    if not (0 <= px <= 1 and 0 <= py <= 1):
        raise ValueError(f"point {x} outside the unit square")
    i = min(int(px * k), k - 1)
    j = min(int(py * k), k - 1)
    u = px * k - i
    v = py * k - j
    upper = v > u
    v00 = vertex_index(k, i, j)
    if upper:
        return Tri(i, j, True, (v00, vertex_index(k, i + 1, j + 1), vertex_index(k, i, j + 1)))
    return Tri(i, j, False, (v00, vertex_index(k, i + 1, j), vertex_index(k, i + 1, j + 1)))


def _sub(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def affine_parts(values: Sequence[Vec], k: int, t: Tri) -> Tuple[Vec, Vec, Vec]:
    """``(f00, Jx, Jy)`` with ``f(x) = f00 + (x - i/k) Jx + (y - j/k) Jy`` on ``t``."""
    f00 = values[vertex_index(k, t.i, t.j)]
    f10 = values[vertex_index(k, t.i + 1, t.j)]
    f11 = values[vertex_index(k, t.i + 1, t.j + 1)]
    f01 = values[vertex_index(k, t.i, t.j + 1)]
    if t.upper:
        jx, jy = _sub(f11, f01), _sub(f01, f00)
    else:
        jx, jy = _sub(f10, f00), _sub(f11, f10)
    return f00, tuple(k * c for c in jx), tuple(k * c for c in jy)


def eval_pl(values: Sequence[Vec], k: int, x: Pt) -> Vec:
    px, py = as_rat(x[0]), as_rat(x[1])
    t = locate(k, (px, py))
    f00, jx, jy = affine_parts(values, k, t)
    dx = px - Fraction(t.i, k)
    dy = py - Fraction(t.j, k)
    return tuple(a + dx * b + dy * c for a, b, c in zip(f00, jx, jy))


def _digest(parts) -> str:
    h = hashlib.sha256()
    for p in parts:
        h.update(p.encode())
        h.update(b";")
    return h.hexdigest()[:16]


@dataclass(frozen=True)
class GridSurface:
    """A PL surface ``[0,1]^2 -> X`` sampled on an ``(m+1) x (m+1)`` vertex grid."""

    m: int
    space: MetricSpace
    samples: Tuple

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("grid resolution must be at least 1")
        n = (self.m + 1) ** 2
        if len(self.samples) != n:
            raise ValueError(f"expected {n} samples for grid {self.m}, got {len(self.samples)}")
        if isinstance(self.space, Table):
            for s in self.samples:
                if not isinstance(s, int) or not 0 <= s < self.space.n:
                    raise ValueError(f"table index {s!r} out of range")
        else:
            fixed = []
            for s in self.samples:
                if len(s) != self.space.d:
                    raise ValueError(f"sample {s!r} has dimension {len(s)}, expected {self.space.d}")
                fixed.append(tuple(as_rat(c) for c in s))
            object.__setattr__(self, "samples", tuple(fixed))

    @property
    def k(self) -> int:
        return self.m

    @property
    def values(self):
        return self.samples

    def digest(self) -> str:
        if isinstance(self.space, Table):
            return _digest([str(self.m)] + [str(s) for s in self.samples])
        return _digest([str(self.m)] + [",".join(map(format_rat, s)) for s in self.samples])

    def boundary_curve(self) -> List[Vec]:
        """Images of the boundary vertices, counter-clockwise from the origin corner."""
        return [self.samples[i] for i in boundary_vertex_indices(self.m)]

    def image_triangles(self) -> List[Tuple[Vec, Vec, Vec]]:
        return [tuple(self.samples[v] for v in t.verts) for t in triangles(self.m)]


@dataclass(frozen=True)
class GridMap:
    """A PL self-map of the unit square given by its vertex images on a k-grid."""

    k: int
    images: Tuple[Pt, ...]

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("grid resolution must be at least 1")
        n = (self.k + 1) ** 2
        if len(self.images) != n:
            raise ValueError(f"expected {n} vertex images for grid {self.k}, got {len(self.images)}")
        fixed = []
        for p in self.images:
            q = (as_rat(p[0]), as_rat(p[1]))
            if not (0 <= q[0] <= 1 and 0 <= q[1] <= 1):
                raise ValueError(f"vertex image {q} outside the unit square")
            fixed.append(q)
        object.__setattr__(self, "images", tuple(fixed))

    @property
    def values(self):
        return self.images

    @classmethod
    def identity(cls, k: int) -> "GridMap":
        return cls(k, tuple(grid_vertices(k)))

    @classmethod
    def from_function(cls, k: int, fn) -> "GridMap":
        return cls(k, tuple(fn(p) for p in grid_vertices(k)))

    def digest(self) -> str:
        return _digest([str(self.k)] + [f"{format_rat(x)},{format_rat(y)}" for x, y in self.images])

    def boundary_map(self) -> "BoundaryMap":
        return BoundaryMap(self.k, tuple(self.images[i] for i in boundary_vertex_indices(self.k)))

    def refine(self, factor: int) -> "GridMap":
        """The same PL map resampled on a grid ``factor`` times finer."""
        k2 = self.k * factor
        return GridMap(k2, tuple(eval_map(self, p) for p in grid_vertices(k2)))


def rotation_map(k: int, quarter_turns: int = 1) -> GridMap:
    """Counter-clockwise rotation of the square about its centre."""
    def rot(p):
        x, y = p
        for _ in range(quarter_turns % 4):
            x, y = 1 - y, x
        return (x, y)
    return GridMap.from_function(k, rot)


def eval_surface(S: GridSurface, x: Pt):
    """Exact barycentric evaluation of a grid surface."""
    if isinstance(S.space, Table):
        px, py = as_rat(x[0]), as_rat(x[1])
        i, j = px * S.m, py * S.m
        if i.denominator != 1 or j.denominator != 1 or not (0 <= i <= S.m and 0 <= j <= S.m):
            raise ValueError("table-space surfaces evaluate only at grid vertices")
        return S.samples[vertex_index(S.m, int(i), int(j))]
    return eval_pl(S.samples, S.m, x)


def eval_map(M: GridMap, x: Pt) -> Pt:
    return eval_pl(M.images, M.k, x)


# ---------------------------------------------------------------------------
# Lipschitz data


def _opnorm_max(jx: Vec, jy: Vec) -> Fraction:
    # operator norm (R^2, max) -> (R^d, max): largest absolute row sum
    return max((abs(a) + abs(b) for a, b in zip(jx, jy)), default=Fraction(0))


def _opnorm_euclid_sq(jx: Vec, jy: Vec) -> Fraction:
    # operator norm (R^2, max) -> (R^d, l2), squared: attained at a corner of the unit ball
    best = Fraction(0)
    for s in (1, -1):
        v = sum(((a + s * b) ** 2 for a, b in zip(jx, jy)), Fraction(0))
        best = max(best, v)
    return best


def lipschitz_constant(f: Union[GridSurface, GridMap, "RadialMap"]) -> Fraction:
    """Lipschitz constant for the max norm on the domain.

    Exact (and attained) for max-norm codomains and self-maps; for
    Euclidean codomains an upper bound within ``2**-40`` of the exact value.
    """
    if isinstance(f, RadialMap):
        return max(_opnorm_max(*_fan_jacobian(f, i)) for i in range(len(f.boundary)))
    space = getattr(f, "space", None)
    if isinstance(space, Table):
        raise ValueError("Lipschitz constants are undefined for table-space surfaces")
    parts = [affine_parts(f.values, f.k, t)[1:] for t in triangles(f.k)]
    if isinstance(space, Euclidean):
        sq = max(_opnorm_euclid_sq(jx, jy) for jx, jy in parts)
        return sqrt_enclosure(sq, Fraction(1, 2**40))[1]
    return max(_opnorm_max(jx, jy) for jx, jy in parts)


@dataclass(frozen=True)
class Modulus:
    """Modulus of continuity of a Lipschitz map: ``n -> n + ceil(log2 max(L, 1))``."""

    lipschitz: Fraction

    @property
    def shift(self) -> int:
        return ceil_log2(max(self.lipschitz, Fraction(1)))

    def rule(self, n: int) -> int:
        return n + self.shift

    def __call__(self, n: int) -> int:
        return self.rule(n)


def modulus_of(f) -> Modulus:
    return Modulus(lipschitz_constant(f))


# ---------------------------------------------------------------------------
# boundary maps and radial extension


def boundary_vertex_indices(k: int) -> List[int]:
    """Boundary vertex indices, counter-clockwise starting at ``(0, 0)``."""
    out = [vertex_index(k, i, 0) for i in range(k)]
    out += [vertex_index(k, k, j) for j in range(k)]
    out += [vertex_index(k, i, k) for i in range(k, 0, -1)]
    out += [vertex_index(k, 0, j) for j in range(k, 0, -1)]
    return out


def boundary_points(k: int) -> List[Pt]:
    verts = grid_vertices(k)
    return [verts[i] for i in boundary_vertex_indices(k)]


@dataclass(frozen=True)
class BoundaryLoop:
    """Closed polyline of rational points; ``points[0] == points[-1]``."""

    points: Tuple[Pt, ...]

    def __post_init__(self):
        pts = tuple((as_rat(p[0]), as_rat(p[1])) for p in self.points)
        if len(pts) < 2 or pts[0] != pts[-1]:
            raise ValueError("boundary loop must be closed (first point == last point)")
        for a, b in zip(pts, pts[1:]):
            if a == b:
                raise ValueError("consecutive loop points must be distinct")
        object.__setattr__(self, "points", pts)

    @classmethod
    def closing(cls, pts: Sequence[Pt]) -> "BoundaryLoop":
        pts = geo.dedupe_ring(list(pts))
        return cls(tuple(pts) + (pts[0],))

    def segments(self):
        return list(zip(self.points, self.points[1:]))


@dataclass(frozen=True)
class BoundaryMap:
    """PL map on the boundary of the unit square, given at the ``4k`` boundary
    vertices of a k-grid (counter-clockwise from the origin corner)."""

    k: int
    images: Tuple[Pt, ...]

    def __post_init__(self):
        if len(self.images) != 4 * self.k:
            raise ValueError(f"boundary map on a {self.k}-grid needs {4 * self.k} images")
        object.__setattr__(self, "images", tuple((as_rat(p[0]), as_rat(p[1])) for p in self.images))

    @classmethod
    def from_function(cls, k: int, fn) -> "BoundaryMap":
        return cls(k, tuple(fn(p) for p in boundary_points(k)))

    def domain_points(self) -> List[Pt]:
        return boundary_points(self.k)

    def __call__(self, x: Pt) -> Pt:
        """Evaluate at a point of the square's boundary."""
        x = (as_rat(x[0]), as_rat(x[1]))
        dom = self.domain_points()
        n = len(dom)
        for i in range(n):
            a, b = dom[i], dom[(i + 1) % n]
            if geo.on_segment(a, b, x):
                span = max(abs(b[0] - a[0]), abs(b[1] - a[1]))
                t = max(abs(x[0] - a[0]), abs(x[1] - a[1])) / span
                return geo.lerp(self.images[i], self.images[(i + 1) % n], t)
        raise ValueError(f"point {x} is not on the boundary of the unit square")


def _max_abs_affine_candidates(den_funcs, rect_lines):
    """Candidate (s, t) points in the unit square for a ratio with a max-of-affine denominator."""
    lines = []
    for (a1, b1, c1), (a2, b2, c2) in combinations(den_funcs, 2):
        lines.append((a1 - a2, b1 - b2, c1 - c2))
    square = [(Fraction(0), Fraction(0)), (Fraction(1), Fraction(0)),
              (Fraction(1), Fraction(1)), (Fraction(0), Fraction(1))]
    return geo.arrangement_points(square, lines)


def boundary_lipschitz(bm: BoundaryMap) -> Fraction:
    """Exact Lipschitz constant of a PL boundary map for the ambient max norm.

    For every pair of boundary segments the ratio ``|f(a)-f(b)| / |a-b|`` is a
    linear-fractional function on each piece where the denominator's active
    term is fixed, so its supremum is attained at an arrangement vertex.
    """
    dom = bm.domain_points()
    img = bm.images
    n = len(dom)
    segs = [(dom[i], dom[(i + 1) % n], img[i], img[(i + 1) % n]) for i in range(n)]
    best = Fraction(0)
    for i in range(n):
        a0, a1, fa0, fa1 = segs[i]
        span = max(abs(a1[0] - a0[0]), abs(a1[1] - a0[1]))
        best = max(best, max(abs(fa1[0] - fa0[0]), abs(fa1[1] - fa0[1])) / span)
    for i, j in combinations(range(n), 2):
        a0, a1, fa0, fa1 = segs[i]
        b0, b1, fb0, fb1 = segs[j]
        # difference a(s) - b(t) per coordinate as affine (coef_s, coef_t, const)
        den = []
        num = []
        for c in range(2):
            dc = (a1[c] - a0[c], -(b1[c] - b0[c]), a0[c] - b0[c])
            nc = (fa1[c] - fa0[c], -(fb1[c] - fb0[c]), fa0[c] - fb0[c])
            den += [dc, tuple(-v for v in dc)]
            num += [nc]
        for s, t in _max_abs_affine_candidates(den, None):
            dv = max(abs(a * s + b * t + c) for a, b, c in den)
            if dv == 0:
                continue
            nv = max(abs(a * s + b * t + c) for a, b, c in num)
            if nv > best * dv:
                best = nv / dv
    return best


def boundary_sup_radius(bm: BoundaryMap) -> Fraction:
    """``sup |f|`` in coordinates where the square is the unit max-norm ball about its centre."""
    return 2 * max(max(abs(p[0] - HALF), abs(p[1] - HALF)) for p in bm.images)


@dataclass(frozen=True)
class RadialMap:
    """PL map on the fan triangulation ``(centre, b_i, b_{i+1})`` of the square."""

    centre_image: Pt
    boundary: Tuple[Pt, ...]
    images: Tuple[Pt, ...]

    def fan_triangle(self, i: int) -> Tuple[Tuple[Pt, Pt, Pt], Tuple[Pt, Pt, Pt]]:
        n = len(self.boundary)
        dom = (CENTRE, self.boundary[i], self.boundary[(i + 1) % n])
        img = (self.centre_image, self.images[i], self.images[(i + 1) % n])
        return dom, img

    def __call__(self, x: Pt) -> Pt:
        x = (as_rat(x[0]), as_rat(x[1]))
        for i in range(len(self.boundary)):
            dom, img = self.fan_triangle(i)
            if geo.in_convex(list(dom), x):
                return _affine_interp(dom, img, x)
        raise ValueError(f"point {x} outside the unit square")


def _affine_interp(dom, img, x):
    a, b, c = dom
    area = geo.orient(a, b, c)
    la = geo.orient(x, b, c) / area
    lb = geo.orient(a, x, c) / area
    lc = 1 - la - lb
    return tuple(la * p + lb * q + lc * r for p, q, r in zip(*img))


def _fan_jacobian(f: RadialMap, i: int) -> Tuple[Vec, Vec]:
    (a, b, c), (fa, fb, fc) = f.fan_triangle(i)
    # solve J [b-a, c-a] = [fb-fa, fc-fa]
    u = (b[0] - a[0], b[1] - a[1])
    w = (c[0] - a[0], c[1] - a[1])
    det = u[0] * w[1] - u[1] * w[0]
    du = tuple(p - q for p, q in zip(fb, fa))
    dw = tuple(p - q for p, q in zip(fc, fa))
    jx = tuple((du[r] * w[1] - dw[r] * u[1]) / det for r in range(len(du)))
    jy = tuple((dw[r] * u[0] - du[r] * w[0]) / det for r in range(len(du)))
    return jx, jy


def radial_extension(f: BoundaryMap) -> RadialMap:
    """Extend a boundary map to the square along max-norm rays from the centre.

    ``F(c + r (b - c)) = c + r (f(b) - c)`` for boundary points ``b`` and
    ``r`` in ``[0, 1]``. On each fan triangle this is the linear interpolant,
    so the result is PL with Lipschitz constant at most
    ``radial_bound_proven(f)``.
    """
    return RadialMap(CENTRE, tuple(f.domain_points()), f.images)


def radial_bound(f: BoundaryMap) -> Fraction:
    """``L + sup|f|``, the customary constant for the radial extension.

    Valid for Euclidean norms. Under the max norm the radial rescaling of a
    point is not its nearest point on the smaller sphere and the constant
    can be exceeded (by up to ``L``); use :func:`radial_bound_proven`.
    """
    return boundary_lipschitz(f) + boundary_sup_radius(f)


def radial_bound_proven(f: BoundaryMap) -> Fraction:
    """``2L + sup|f|``: a Lipschitz constant of the radial extension for the max norm.

    For ``|y| <= |x| = r`` and ``s = |y|``, ``|(s/r) x - y| <= 2|x - y|``
    holds in any norm, which gives the factor two on ``L``.
    """
    return 2 * boundary_lipschitz(f) + boundary_sup_radius(f)


# ---------------------------------------------------------------------------
# distances between maps


def sup_distance(M1: GridMap, M2: GridMap) -> Fraction:
    """Exact ``max_x |M1(x) - M2(x)|`` (max norm), taken over the overlay vertices."""
    lines = geo.grid_lines(M1.k) + (geo.grid_lines(M2.k) if M2.k != M1.k else [])
    square = [(Fraction(0), Fraction(0)), (Fraction(1), Fraction(0)),
              (Fraction(1), Fraction(1)), (Fraction(0), Fraction(1))]
    best = Fraction(0)
    for p in geo.arrangement_points(square, lines):
        a, b = eval_map(M1, p), eval_map(M2, p)
        best = max(best, abs(a[0] - b[0]), abs(a[1] - b[1]))
    return best


def graph_triangles(M: GridMap) -> List[Tuple[Vec, Vec, Vec]]:
    """The graph of ``M`` as triangles in ``R^4 = D^2 x D^2``."""
    verts = grid_vertices(M.k)
    return [tuple(verts[v] + M.images[v] for v in t.verts) for t in triangles(M.k)]


def graph_distance(M1: GridMap, M2: GridMap, precision=Fraction(1, 64)):
    """Enclosure of the Hausdorff distance between the graphs of two maps,
    for the product max metric on ``D^2 x D^2``."""
    from .hausdorff import hausdorff_triangles

    return hausdorff_triangles(graph_triangles(M1), graph_triangles(M2), MaxNorm(4), as_rat(precision))
