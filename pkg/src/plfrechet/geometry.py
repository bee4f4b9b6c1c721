"""Exact planar predicates over rationals.

Points are ``(x, y)`` tuples of Fractions; a line is ``(a, b, c)`` meaning
``a*x + b*y + c = 0``.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable, List, Optional, Sequence, Tuple

Pt = Tuple[Fraction, Fraction]
Line = Tuple[Fraction, Fraction, Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)


def orient(a: Pt, b: Pt, c: Pt) -> Fraction:
    """Twice the signed area of ``abc``; positive for a left turn."""
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def sign(x) -> int:
    return (x > 0) - (x < 0)


def on_segment(a: Pt, b: Pt, p: Pt) -> bool:
    if orient(a, b, p) != 0:
        return False
    return (min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def line_through(p: Pt, q: Pt) -> Line:
    """Line through ``p`` and ``q``, positive on its left."""
    a = p[1] - q[1]
    b = q[0] - p[0]
    return (a, b, -(a * p[0] + b * p[1]))


def line_value(line: Line, p: Pt) -> Fraction:
    return line[0] * p[0] + line[1] * p[1] + line[2]


def intersect_lines(l1: Line, l2: Line) -> Optional[Pt]:
    det = l1[0] * l2[1] - l1[1] * l2[0]
    if det == 0:
        return None
    x = (l1[1] * l2[2] - l1[2] * l2[1]) / det
    y = (l1[2] * l2[0] - l1[0] * l2[2]) / det
    return (x, y)


def segment_line_params(a: Pt, b: Pt, line: Line) -> List[Fraction]:
    """Parameters ``t`` in ``[0, 1]`` where ``a + t(b - a)`` meets ``line``.

    A segment lying on the line contributes nothing (its endpoints already
    are candidates wherever this is used).
    """
    va, vb = line_value(line, a), line_value(line, b)
    if va == vb:
        return []
    t = va / (va - vb)
    return [t] if 0 <= t <= 1 else []


def lerp(a: Pt, b: Pt, t: Fraction) -> Pt:
    return (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))


def clip_halfplane(poly: Sequence[Pt], line: Line) -> List[Pt]:
    """Clip a convex polygon to ``line_value >= 0`` (Sutherland-Hodgman)."""
    out: List[Pt] = []
    n = len(poly)
    if n == 0:
        return out
    for i in range(n):
        p, q = poly[i], poly[(i + 1) % n]
        vp, vq = line_value(line, p), line_value(line, q)
        if vp >= 0:
            out.append(p)
        if (vp > 0 and vq < 0) or (vp < 0 and vq > 0):
            out.append(lerp(p, q, vp / (vp - vq)))
    return dedupe_ring(out)


def dedupe_ring(pts: Sequence[Pt]) -> List[Pt]:
    out: List[Pt] = []
    for p in pts:
        if not out or out[-1] != p:
            out.append(p)
    while len(out) > 1 and out[0] == out[-1]:
        out.pop()
    return out


def ccw_halfplanes(poly: Sequence[Pt]) -> List[Line]:
    """Half-planes (left of each edge) whose intersection is a CCW convex polygon."""
    return [line_through(poly[i], poly[(i + 1) % len(poly)]) for i in range(len(poly))]


def clip_convex(subject: Sequence[Pt], clip: Sequence[Pt]) -> List[Pt]:
    """Intersection of two convex polygons, ``clip`` given counter-clockwise."""
    out = list(subject)
    for hp in ccw_halfplanes(clip):
        out = clip_halfplane(out, hp)
        if not out:
            break
    return out


def polygon_area2(poly: Sequence[Pt]) -> Fraction:
    n = len(poly)
    return sum((poly[i][0] * poly[(i + 1) % n][1] - poly[(i + 1) % n][0] * poly[i][1]
                for i in range(n)), ZERO)


def in_convex(poly: Sequence[Pt], p: Pt) -> bool:
    """Closed containment in a CCW convex polygon (degenerate polygons allowed)."""
    n = len(poly)
    if n == 1:
        return poly[0] == p
    if n == 2 or polygon_area2(poly) == 0:
        return any(on_segment(poly[i], poly[(i + 1) % n], p) for i in range(n))
    return all(orient(poly[i], poly[(i + 1) % n], p) >= 0 for i in range(n))


def convex_hull(points: Iterable[Pt]) -> List[Pt]:
    """CCW hull (Andrew's monotone chain); collinear points dropped."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: List[Pt] = []
    for p in pts:
        while len(lower) >= 2 and orient(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: List[Pt] = []
    for p in reversed(pts):
        while len(upper) >= 2 and orient(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def convex_sets_intersect(P: Sequence[Pt], Q: Sequence[Pt]) -> bool:
    """Whether the closed convex hulls of two point sets meet."""
    hp, hq = convex_hull(P), convex_hull(Q)
    return separating_axis(hp, hq) is None


def separating_axis(hp: Sequence[Pt], hq: Sequence[Pt]) -> Optional[Tuple[Pt, Fraction, Fraction]]:
    """An axis ``n`` with ``max n.P < min n.Q`` (strict), or None if the hulls meet.

    For planar convex sets it suffices to try the edge normals of both hulls;
    degenerate hulls (points, segments) also try the segment direction.
    """
    def axes(h):
        out = []
        m = len(h)
        for i in range(m):
            a, b = h[i], h[(i + 1) % m]
            if a != b:
                out.append((b[1] - a[1], a[0] - b[0]))
                out.append((b[0] - a[0], b[1] - a[1]))
        return out

    cand = axes(hp) + axes(hq)
    if not cand:
        if hp[0] == hq[0]:
            return None
        cand = [(hq[0][0] - hp[0][0], hq[0][1] - hp[0][1])]
    for n in cand:
        for s in (1, -1):
            ax = (s * n[0], s * n[1])
            pmax = max(ax[0] * p[0] + ax[1] * p[1] for p in hp)
            qmin = min(ax[0] * q[0] + ax[1] * q[1] for q in hq)
            if pmax < qmin:
                return ax, pmax, qmin
    return None


def arrangement_points(poly: Sequence[Pt], lines: Sequence[Line]) -> List[Pt]:
    """Vertices of the arrangement of ``lines`` restricted to a convex polygon.

    Returns the polygon's vertices, the crossings of each line with the
    polygon boundary and the pairwise line intersections inside the polygon.
    A convex function that is affine on every face attains its maximum at
    one of these points.
    """
    pts = set(poly)
    n = len(poly)
    for line in lines:
        for i in range(n):
            a, b = poly[i], poly[(i + 1) % n]
            for t in segment_line_params(a, b, line):
                pts.add(lerp(a, b, t))
    if len(poly) >= 3:
        for l1, l2 in combinations(lines, 2):
            p = intersect_lines(l1, l2)
            if p is not None and in_convex(poly, p):
                pts.add(p)
    return list(pts)


def grid_lines(k: int) -> List[Line]:
    """The lines carrying the edges of the fixed-diagonal triangulation of a k-grid."""
    out: List[Line] = []
    for i in range(k + 1):
        c = Fraction(i, k)
        out.append((ONE, ZERO, -c))
        out.append((ZERO, ONE, -c))
    for c in range(-k + 1, k):
        out.append((ONE, -ONE, -Fraction(c, k)))
    return out


def triangulate_simple_polygon(poly: Sequence[Pt]) -> List[Tuple[Pt, Pt, Pt]]:
    """Ear-clipping triangulation of a simple CCW polygon (exact)."""
    pts = dedupe_ring(list(poly))
    if polygon_area2(pts) < 0:
        pts = pts[::-1]
    tris: List[Tuple[Pt, Pt, Pt]] = []
    guard = 0
    while len(pts) > 3:
        n = len(pts)
        for i in range(n):
            a, b, c = pts[i - 1], pts[i], pts[(i + 1) % n]
            o = orient(a, b, c)
            if o < 0:
                continue
            if o == 0:
                # drop collinear middle vertex
                pts.pop(i)
                break
            if any(
                p not in (a, b, c) and orient(a, b, p) >= 0 and orient(b, c, p) >= 0 and orient(c, a, p) >= 0
                for p in pts
            ):
                continue
            tris.append((a, b, c))
            pts.pop(i)
            break
        else:
            raise ValueError("polygon is not simple")
        guard += 1
        if guard > 10_000:
            raise ValueError("triangulation did not terminate")
    if len(pts) == 3 and orient(*pts) > 0:
        tris.append(tuple(pts))
    return tris
