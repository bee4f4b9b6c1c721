"""Brouwer degree of PL planar maps on polygonal regions.

Two independent algorithms are implemented and cross-checked on every
query: the signed count of map triangles whose image covers the target, and
the winding number of the image of the region boundary around the target.
Targets on the image of an interior triangulation edge are handled by the
symbolic perturbation ``y + (eps, eps**2)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from . import geometry as geo
from .plmap import (
    GridMap,
    RadialMap,
    affine_parts,
    grid_vertices,
    triangles,
)
from .scalar import as_rat

Pt = Tuple[Fraction, Fraction]
Segment = Tuple[Pt, Pt]

ZERO, ONE = Fraction(0), Fraction(1)


class DegreeUndefined(ValueError):
    """The target lies on the image of the region boundary."""


class DegreeMismatch(AssertionError):
    """The two degree algorithms disagree (a bug, never expected)."""


# ---------------------------------------------------------------------------
# maps


@dataclass(frozen=True)
class PLGridMap:
    """Grid-triangulated PL map into R^2 without the unit-square range check."""

    k: int
    values: Tuple[Pt, ...]


PLMapLike = Union[GridMap, PLGridMap, RadialMap]


@dataclass(frozen=True)
class Piece:
    dom: Tuple[Pt, Pt, Pt]  # counter-clockwise
    img: Tuple[Pt, Pt, Pt]
    label: tuple

    @property
    def det_sign(self) -> int:
        return geo.sign(geo.orient(*self.img))

    def apply(self, x: Pt) -> Pt:
        a, b, c = self.dom
        area = geo.orient(a, b, c)
        la = geo.orient(x, b, c) / area
        lb = geo.orient(a, x, c) / area
        lc = 1 - la - lb
        fa, fb, fc = self.img
        return (la * fa[0] + lb * fb[0] + lc * fc[0], la * fa[1] + lb * fb[1] + lc * fc[1])

    def preimage(self, y: Pt) -> Pt:
        """Solve ``apply(x) = y`` (nondegenerate pieces only)."""
        a, b, c = self.dom
        fa, fb, fc = self.img
        u = (fb[0] - fa[0], fb[1] - fa[1])
        w = (fc[0] - fa[0], fc[1] - fa[1])
        det = u[0] * w[1] - u[1] * w[0]
        r = (y[0] - fa[0], y[1] - fa[1])
        s = (r[0] * w[1] - r[1] * w[0]) / det
        t = (u[0] * r[1] - u[1] * r[0]) / det
        return (a[0] + s * (b[0] - a[0]) + t * (c[0] - a[0]),
                a[1] + s * (b[1] - a[1]) + t * (c[1] - a[1]))


def map_values(f: PLMapLike):
    return f.images if isinstance(f, GridMap) else f.values


def pieces(f: PLMapLike) -> List[Piece]:
    if isinstance(f, RadialMap):
        out = []
        for i in range(len(f.boundary)):
            dom, img = f.fan_triangle(i)
            out.append(Piece(dom, img, ("fan", i)))
        return out
    verts = grid_vertices(f.k)
    vals = map_values(f)
    return [Piece(tuple(verts[v] for v in t.verts), tuple(vals[v] for v in t.verts),
                  (t.i, t.j, "upper" if t.upper else "lower"))
            for t in triangles(f.k)]


def breaklines(f: PLMapLike) -> List[geo.Line]:
    if isinstance(f, RadialMap):
        lines = [geo.line_through((Fraction(1, 2), Fraction(1, 2)), b) for b in f.boundary]
        return lines + geo.grid_lines(1)
    return geo.grid_lines(f.k)


def evaluate(f: PLMapLike, x: Pt) -> Pt:
    if isinstance(f, RadialMap):
        return f(x)
    from .plmap import eval_pl
    return eval_pl(map_values(f), f.k, x)


def translate(f: PLMapLike, v: Pt) -> PLGridMap:
    """``x -> f(x) + v`` as an unrestricted PL grid map."""
    if isinstance(f, RadialMap):
        raise TypeError("translate expects a grid map")
    return PLGridMap(f.k, tuple((p[0] + v[0], p[1] + v[1]) for p in map_values(f)))


def straight_homotopy(f: PLMapLike, g: PLMapLike, t: Fraction) -> PLGridMap:
    if f.k != g.k:
        raise ValueError("homotopy endpoints must share a grid")
    vf, vg = map_values(f), map_values(g)
    return PLGridMap(f.k, tuple(((1 - t) * a[0] + t * b[0], (1 - t) * a[1] + t * b[1])
                                for a, b in zip(vf, vg)))


# ---------------------------------------------------------------------------
# regions


def _maxnorm_point_segment(p: Pt, a: Pt, b: Pt) -> Fraction:
    # max(|p - a - t d|) over t in [0, 1]: convex PL, minimum at a breakpoint
    d = (b[0] - a[0], b[1] - a[1])
    w = (p[0] - a[0], p[1] - a[1])
    cands = {ZERO, ONE}
    for c in range(2):
        if d[c] != 0:
            cands.add(w[c] / d[c])
    for s in (1, -1):
        den = d[0] - s * d[1]
        if den != 0:
            cands.add((w[0] - s * w[1]) / den)
    best = None
    for t in cands:
        if 0 <= t <= 1:
            v = max(abs(w[0] - t * d[0]), abs(w[1] - t * d[1]))
            if best is None or v < best:
                best = v
    return best


class _RegionBase:
    def boundary_edges(self) -> List[Segment]:
        raise NotImplementedError

    def convex_pieces(self) -> List[List[Pt]]:
        raise NotImplementedError

    def contains(self, p: Pt) -> bool:
        """Open containment (points on the boundary are outside)."""
        p = (as_rat(p[0]), as_rat(p[1]))
        try:
            return winding_number(self.boundary_edges(), p) != 0
        except DegreeUndefined:
            return False

    def signed_distance(self, p: Pt) -> Fraction:
        """Max-norm distance to the boundary, negative exactly on the interior."""
        p = (as_rat(p[0]), as_rat(p[1]))
        d = min(_maxnorm_point_segment(p, a, b) for a, b in self.boundary_edges())
        if d == 0:
            return d
        return -d if self.contains(p) else d


@dataclass(frozen=True)
class CellRegion(_RegionBase):
    """Union of closed grid cells ``[i/r, (i+1)/r] x [j/r, (j+1)/r]`` (as an open set)."""

    resolution: int
    cells: FrozenSet[Tuple[int, int]]

    def __post_init__(self):
        cells = frozenset((int(i), int(j)) for i, j in self.cells)
        r = self.resolution
        for i, j in cells:
            if not (0 <= i < r and 0 <= j < r):
                raise ValueError(f"cell ({i}, {j}) outside a {r}x{r} grid")
        if not cells:
            raise ValueError("empty cell region")
        object.__setattr__(self, "cells", cells)

    @classmethod
    def whole(cls, r: int = 1) -> "CellRegion":
        return cls(r, frozenset((i, j) for i in range(r) for j in range(r)))

    def _corner(self, i, j) -> Pt:
        return (Fraction(i, self.resolution), Fraction(j, self.resolution))

    def boundary_edges(self) -> List[Segment]:
        c = self._corner
        out = []
        for i, j in sorted(self.cells):
            if (i, j - 1) not in self.cells:
                out.append((c(i, j), c(i + 1, j)))
            if (i + 1, j) not in self.cells:
                out.append((c(i + 1, j), c(i + 1, j + 1)))
            if (i, j + 1) not in self.cells:
                out.append((c(i + 1, j + 1), c(i, j + 1)))
            if (i - 1, j) not in self.cells:
                out.append((c(i, j + 1), c(i, j)))
        return out

    def convex_pieces(self) -> List[List[Pt]]:
        c = self._corner
        return [[c(i, j), c(i + 1, j), c(i + 1, j + 1), c(i, j + 1)] for i, j in sorted(self.cells)]

    def components(self) -> List["CellRegion"]:
        """Edge-connected components."""
        todo = set(self.cells)
        out = []
        while todo:
            start = min(todo)
            comp = {start}
            stack = [start]
            todo.discard(start)
            while stack:
                i, j = stack.pop()
                for nb in ((i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1)):
                    if nb in todo:
                        todo.discard(nb)
                        comp.add(nb)
                        stack.append(nb)
            out.append(CellRegion(self.resolution, frozenset(comp)))
        return out


@dataclass(frozen=True)
class PolygonRegion(_RegionBase):
    """Interior of a simple rational polygon inside the unit square."""

    vertices: Tuple[Pt, ...]

    def __post_init__(self):
        pts = geo.dedupe_ring([(as_rat(x), as_rat(y)) for x, y in self.vertices])
        if len(pts) < 3:
            raise ValueError("polygon needs at least three distinct vertices")
        if any(not (0 <= x <= 1 and 0 <= y <= 1) for x, y in pts):
            raise ValueError("polygon must lie in the unit square")
        area = geo.polygon_area2(pts)
        if area == 0:
            raise ValueError("polygon has zero area")
        if area < 0:
            pts = pts[::-1]
        n = len(pts)
        for i in range(n):
            for j in range(i + 1, n):
                if j == i + 1 or (i == 0 and j == n - 1):
                    continue
                if _segments_meet(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n]):
                    raise ValueError("polygon is not simple")
        object.__setattr__(self, "vertices", tuple(pts))

    def boundary_edges(self) -> List[Segment]:
        v = self.vertices
        return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]

    def convex_pieces(self) -> List[List[Pt]]:
        return [list(t) for t in geo.triangulate_simple_polygon(self.vertices)]


def _segments_meet(a, b, c, d) -> bool:
    o1, o2 = geo.orient(a, b, c), geo.orient(a, b, d)
    o3, o4 = geo.orient(c, d, a), geo.orient(c, d, b)
    if ((o1 > 0 and o2 < 0) or (o1 < 0 and o2 > 0)) and ((o3 > 0 and o4 < 0) or (o3 < 0 and o4 > 0)):
        return True
    return (geo.on_segment(a, b, c) or geo.on_segment(a, b, d)
            or geo.on_segment(c, d, a) or geo.on_segment(c, d, b))


Region = Union[CellRegion, PolygonRegion]


# ---------------------------------------------------------------------------
# winding number


def winding_number(loop, y: Pt) -> int:
    """Winding number of a closed polyline (or a cycle of segments) around ``y``.

    Crossing rule with a horizontal ray; exact. Raises :class:`DegreeUndefined`
    if ``y`` lies on the curve.
    """
    y = (as_rat(y[0]), as_rat(y[1]))
    segs = loop.segments() if hasattr(loop, "segments") else list(loop)
    wn = 0
    for a, b in segs:
        if geo.on_segment(a, b, y):
            raise DegreeUndefined(f"point {y} lies on the curve")
        if a[1] <= y[1]:
            if b[1] > y[1] and geo.orient(a, b, y) > 0:
                wn += 1
        elif b[1] <= y[1] and geo.orient(a, b, y) < 0:
            wn -= 1
    return wn


# ---------------------------------------------------------------------------
# degree


@dataclass(frozen=True)
class DegreeQuery:
    map: PLMapLike
    region: Region
    target: Pt

    def __post_init__(self):
        object.__setattr__(self, "target", (as_rat(self.target[0]), as_rat(self.target[1])))

    def boundary_image(self) -> List[Segment]:
        return boundary_image(self.map, self.region)

    def well_posed(self) -> bool:
        y = self.target
        return not any(geo.on_segment(a, b, y) for a, b in self.boundary_image())


def split_segment(a: Pt, b: Pt, lines: Sequence[geo.Line]) -> List[Pt]:
    ts = {ZERO, ONE}
    for line in lines:
        ts.update(geo.segment_line_params(a, b, line))
    return [geo.lerp(a, b, t) for t in sorted(ts)]


def boundary_image(f: PLMapLike, region: Region) -> List[Segment]:
    """Image of the oriented region boundary as a cycle of segments."""
    lines = breaklines(f)
    out = []
    for a, b in region.boundary_edges():
        pts = [evaluate(f, p) for p in split_segment(a, b, lines)]
        for p, q in zip(pts, pts[1:]):
            if p != q:
                out.append((p, q))
    return out


def _perturbed_left(a: Pt, b: Pt, y: Pt) -> bool:
    """Whether ``y + (eps, eps^2)`` lies strictly left of the directed line ``ab``."""
    o = geo.orient(a, b, y)
    if o != 0:
        return o > 0
    ux, uy = b[0] - a[0], b[1] - a[1]
    if uy != 0:
        return -uy > 0
    return ux > 0


@dataclass(frozen=True)
class Witness:
    """A map piece whose image contains the target, with an exact preimage."""

    piece: tuple
    triangle: Tuple[Pt, Pt, Pt]
    image: Tuple[Pt, Pt, Pt]
    preimage: Pt


@dataclass(frozen=True)
class DegreeResult:
    value: int
    witness: Optional[Witness]

    def __int__(self):
        return self.value


def _region_cuts(f: PLMapLike, region: Region):
    for pc in pieces(f):
        for poly in region.convex_pieces():
            q = geo.clip_convex(list(pc.dom), poly)
            if len(q) >= 3 and geo.polygon_area2(q) != 0:
                yield pc, q


def _triangle_sum(f: PLMapLike, region: Region, y: Pt):
    total = 0
    hits = []
    for pc, q in _region_cuts(f, region):
        s = pc.det_sign
        if s == 0:
            continue
        img = [pc.apply(p) for p in q]
        if s < 0:
            img.reverse()
        img = geo.dedupe_ring(img)
        n = len(img)
        if all(_perturbed_left(img[i], img[(i + 1) % n], y) for i in range(n)):
            total += s
            hits.append((s, pc))
    w = None
    if total != 0:
        pc = next(pc for s, pc in hits if s == geo.sign(total))
        w = Witness(pc.label, pc.dom, pc.img, pc.preimage(y))
    return total, w


def degree_triangle_sum(q: DegreeQuery) -> int:
    """Signed count of map triangles (clipped to the region) covering the target."""
    if not q.well_posed():
        raise DegreeUndefined("degree undefined: target on boundary image")
    return _triangle_sum(q.map, q.region, q.target)[0]


def degree(q: DegreeQuery) -> DegreeResult:
    """Degree of ``q.map`` on ``q.region`` at ``q.target``, cross-checked."""
    bimg = q.boundary_image()
    y = q.target
    if any(geo.on_segment(a, b, y) for a, b in bimg):
        raise DegreeUndefined("degree undefined: target on boundary image")
    total, w = _triangle_sum(q.map, q.region, y)
    wn = winding_number(bimg, y)
    if wn != total:
        raise DegreeMismatch(f"triangle sum {total} != winding number {wn}")
    return DegreeResult(total, w)


def covers(f: PLMapLike, region: Region, y: Pt) -> bool:
    """Whether ``y`` lies in the image of the closed region."""
    y = (as_rat(y[0]), as_rat(y[1]))
    for pc, q in _region_cuts(f, region):
        img = geo.convex_hull(pc.apply(p) for p in q)
        if geo.in_convex(img, y):
            return True
    return False


def image_hulls(f: PLMapLike, region: Optional[Region] = None) -> List[List[Pt]]:
    """Convex images of the map pieces (optionally clipped to a region)."""
    if region is None:
        return [geo.convex_hull(pc.img) for pc in pieces(f)]
    return [geo.convex_hull(pc.apply(p) for p in q) for pc, q in _region_cuts(f, region)]


def straight_homotopy_avoids(f: PLMapLike, g: PLMapLike, region: Region, y: Pt,
                             depth: int = 6) -> bool:
    """Exact sufficient check that ``y`` avoids ``(1-t) f + t g`` on the region
    boundary for every ``t`` in ``[0, 1]``.

    On each boundary piece the homotopy is bilinear in (position, time), so its
    values lie in the hull of the four corner values; pieces whose hull
    contains ``y`` are bisected up to ``depth`` times.
    """
    y = (as_rat(y[0]), as_rat(y[1]))
    lines = breaklines(f) + breaklines(g)

    def ok(a, b, t0, t1, d):
        fa, fb, ga, gb = evaluate(f, a), evaluate(f, b), evaluate(g, a), evaluate(g, b)
        corners = []
        for t in (t0, t1):
            for p, q in ((fa, ga), (fb, gb)):
                corners.append(((1 - t) * p[0] + t * q[0], (1 - t) * p[1] + t * q[1]))
        if not geo.in_convex(geo.convex_hull(corners), y):
            return True
        if d == 0:
            return False
        m = geo.lerp(a, b, Fraction(1, 2))
        tm = (t0 + t1) / 2
        return all(ok(p, q, s0, s1, d - 1) for p, q in ((a, m), (m, b)) for s0, s1 in ((t0, tm), (tm, t1)))

    for a, b in region.boundary_edges():
        pts = split_segment(a, b, lines)
        for p, q in zip(pts, pts[1:]):
            if not ok(p, q, ZERO, ONE, depth):
                return False
    return True
