"""Validated Hausdorff distance between finite unions of triangles in R^d.

Branch and bound over the triangles of one complex. On a triangle ``tau``
the distance to a convex triangle ``T`` is convex, so
``max_{v in vertices(tau)} dist(v, T)`` bounds ``sup_{tau} dist(., T)``;
taking the minimum over ``T`` gives an upper bound for the directed
distance, while every vertex yields an attained lower bound. Triangles are
refined by midpoint subdivision until the bounds meet.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from . import geometry as geo
from .scalar import Enclosure, Euclidean, MaxNorm, Table, sqrt_enclosure

Vec = Tuple[Fraction, ...]
Triangle = Tuple[Vec, Vec, Vec]

_SIMPLEX = [(Fraction(0), Fraction(0)), (Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))]


def maxnorm_point_triangle(p: Vec, tri: Triangle) -> Fraction:
    """Exact max-norm distance from ``p`` to a (possibly degenerate) triangle."""
    v0, v1, v2 = tri
    if p in tri:
        return Fraction(0)
    # residual r_c(s, t) = p_c - v0_c - s e1_c - t e2_c
    funcs = []
    for c in range(len(p)):
        a = v0[c] - v1[c]
        b = v0[c] - v2[c]
        k = p[c] - v0[c]
        funcs.append((a, b, k))
    lines = []
    n = len(funcs)
    for i in range(n):
        a, b, k = funcs[i]
        lines.append((a, b, k))
        for j in range(i + 1, n):
            a2, b2, k2 = funcs[j]
            lines.append((a - a2, b - b2, k - k2))
            lines.append((a + a2, b + b2, k + k2))
    best = None
    for s, t in geo.arrangement_points(_SIMPLEX, lines):
        v = max(abs(a * s + b * t + k) for a, b, k in funcs)
        if best is None or v < best:
            best = v
            if v == 0:
                break
    return best


def euclid_sq_point_triangle(p: Vec, tri: Triangle) -> Fraction:
    """Exact squared Euclidean distance from ``p`` to a (possibly degenerate) triangle."""
    v0, v1, v2 = tri
    e1 = tuple(a - b for a, b in zip(v1, v0))
    e2 = tuple(a - b for a, b in zip(v2, v0))
    w = tuple(a - b for a, b in zip(p, v0))

    def dot(x, y):
        return sum((a * b for a, b in zip(x, y)), Fraction(0))

    a11, a12, a22 = dot(e1, e1), dot(e1, e2), dot(e2, e2)
    b1, b2 = dot(w, e1), dot(w, e2)
    det = a11 * a22 - a12 * a12
    if det != 0:
        s = (b1 * a22 - b2 * a12) / det
        t = (a11 * b2 - a12 * b1) / det
        if s >= 0 and t >= 0 and s + t <= 1:
            q = tuple(v0[c] + s * e1[c] + t * e2[c] for c in range(len(p)))
            return dot(tuple(x - y for x, y in zip(p, q)), tuple(x - y for x, y in zip(p, q)))
    return min(_seg_sq(p, v0, v1), _seg_sq(p, v1, v2), _seg_sq(p, v2, v0))


def _seg_sq(p: Vec, a: Vec, b: Vec) -> Fraction:
    d = tuple(y - x for x, y in zip(a, b))
    w = tuple(y - x for x, y in zip(a, p))
    dd = sum((x * x for x in d), Fraction(0))
    t = Fraction(0) if dd == 0 else sum((x * y for x, y in zip(w, d)), Fraction(0)) / dd
    t = min(Fraction(1), max(Fraction(0), t))
    r = tuple(w[c] - t * d[c] for c in range(len(p)))
    return sum((x * x for x in r), Fraction(0))


def _bbox(tri: Triangle):
    return tuple(min(c) for c in zip(*tri)), tuple(max(c) for c in zip(*tri))


class _Target:
    """Distance oracle to a union of triangles, with per-point caching."""

    def __init__(self, tris: Sequence[Triangle], euclid: bool):
        self.tris = list(tris)
        self.boxes = [_bbox(t) for t in self.tris]
        self.euclid = euclid
        self.cache: Dict[Tuple[Vec, int], Fraction] = {}

    def _box_lb(self, p: Vec, box) -> Fraction:
        lo, hi = box
        gaps = [max(Fraction(0), lo[c] - p[c], p[c] - hi[c]) for c in range(len(p))]
        if self.euclid:
            return sum((g * g for g in gaps), Fraction(0))
        return max(gaps, default=Fraction(0))

    def dist(self, p: Vec, idx: int) -> Fraction:
        key = (p, idx)
        v = self.cache.get(key)
        if v is None:
            tri = self.tris[idx]
            v = euclid_sq_point_triangle(p, tri) if self.euclid else maxnorm_point_triangle(p, tri)
            self.cache[key] = v
        return v

    def nearest(self, p: Vec) -> Fraction:
        order = sorted(range(len(self.tris)), key=lambda i: self._box_lb(p, self.boxes[i]))
        best = None
        for i in order:
            if best is not None and self._box_lb(p, self.boxes[i]) >= best:
                break
            d = self.dist(p, i)
            if best is None or d < best:
                best = d
        return best

    def cell_upper(self, verts: Sequence[Vec], cap) -> Fraction:
        """``min_T max_v dist(v, T)``; stops early once below ``cap``."""
        lo = tuple(min(c) for c in zip(*verts))
        hi = tuple(max(c) for c in zip(*verts))
        centre = tuple((a + b) / 2 for a, b in zip(lo, hi))
        order = sorted(range(len(self.tris)), key=lambda i: self._box_lb(centre, self.boxes[i]))
        best = None
        for i in order:
            box_gap = max(self._box_lb(v, self.boxes[i]) for v in verts)
            if best is not None and box_gap >= best:
                continue
            m = Fraction(0)
            for v in verts:
                m = max(m, self.dist(v, i))
                if best is not None and m >= best:
                    break
            if best is None or m < best:
                best = m
                if cap is not None and best <= cap:
                    break
        return best


def _mid(a: Vec, b: Vec) -> Vec:
    return tuple((x + y) / 2 for x, y in zip(a, b))


def _directed(src: Sequence[Triangle], dst: _Target, tol_sq_fn, max_cells: int):
    """Bounds ``(lo, hi)`` on ``sup_{p in src} dist(p, dst)`` (squared if Euclidean)."""
    lower = Fraction(0)
    heap: List = []
    counter = 0
    vert_best: Dict[Vec, Fraction] = {}

    def vert_lb(v):
        d = vert_best.get(v)
        if d is None:
            d = dst.nearest(v)
            vert_best[v] = d
        return d

    def push(tri):
        nonlocal lower, counter
        for v in tri:
            lower = max(lower, vert_lb(v))
        up = dst.cell_upper(tri, lower)
        counter += 1
        heapq.heappush(heap, (-up, counter, tri))

    for tri in src:
        push(tri)
    cells = 0
    while heap:
        neg_up, _, tri = heap[0]
        up = -neg_up
        if up <= lower or tol_sq_fn(lower, up):
            break
        heapq.heappop(heap)
        cells += 1
        if cells > max_cells:
            heapq.heappush(heap, (neg_up, 0, tri))
            break
        a, b, c = tri
        ab, bc, ca = _mid(a, b), _mid(b, c), _mid(c, a)
        for child in ((a, ab, ca), (ab, b, bc), (ca, bc, c), (ab, bc, ca)):
            push(child)
    upper = max(lower, -heap[0][0]) if heap else lower
    return lower, upper


def hausdorff_triangles(A: Sequence[Triangle], B: Sequence[Triangle], space,
                        tol: Fraction, max_cells: int = 200_000) -> Enclosure:
    """Enclosure of the Hausdorff distance between two unions of triangles.

    The width is at most ``tol`` unless ``max_cells`` refinements were not
    enough, in which case the (still sound) wider enclosure is returned.
    """
    if isinstance(space, Table):
        raise ValueError("Hausdorff distance of images needs a vector codomain")
    euclid = isinstance(space, Euclidean)
    tol = Fraction(tol)
    if euclid:
        prec = tol / 4

        def done(lo, hi):
            return sqrt_enclosure(hi, prec)[1] - sqrt_enclosure(lo, prec)[0] <= tol
    else:
        def done(lo, hi):
            return hi - lo <= tol
    lo1, hi1 = _directed(A, _Target(B, euclid), done, max_cells)
    lo2, hi2 = _directed(B, _Target(A, euclid), done, max_cells)
    lo, hi = max(lo1, lo2), max(hi1, hi2)
    if euclid:
        prec = tol / 4
        lo, hi = sqrt_enclosure(lo, prec)[0], sqrt_enclosure(hi, prec)[1]
    return Enclosure.between(lo, hi, stamp={"tol": tol})


__all__ = [
    "maxnorm_point_triangle",
    "euclid_sq_point_triangle",
    "hausdorff_triangles",
    "MaxNorm",
]
