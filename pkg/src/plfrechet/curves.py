"""Fréchet distance of closed polygonal curves with a free base point.

Decision at level ``eps`` runs the free-space reachability propagation on
``P x (Q followed by Q)`` from every critical start height. The feasible
start heights form a closed set whose boundary consists of free-interval
endpoints (shifted by one period) and vertex heights, so trying these
finitely many candidates decides the problem exactly. For max-norm spaces
every predicate is rational; Euclidean free intervals use inner and outer
square-root enclosures.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .scalar import Enclosure, Euclidean, MaxNorm, Table, as_rat, max_dist, sq_dist, sqrt_enclosure

Vec = Tuple[Fraction, ...]
Interval = Optional[Tuple[Fraction, Fraction]]

ZERO, ONE = Fraction(0), Fraction(1)


@dataclass(frozen=True)
class ClosedCurve:
    """A closed polyline; the closing edge from the last vertex to the first is implicit."""

    points: Tuple[Vec, ...]
    space: object

    def __post_init__(self):
        if isinstance(self.space, Table):
            raise ValueError("closed curves need a vector space")
        pts = [tuple(as_rat(c) for c in p) for p in self.points]
        if len(pts) > 1 and pts[0] == pts[-1]:
            pts.pop()
        if len(set(pts)) < 3:
            raise ValueError("a closed curve needs at least 3 distinct vertices")
        for p in pts:
            if len(p) != self.space.d:
                raise ValueError(f"vertex {p} has dimension {len(p)}, expected {self.space.d}")
        object.__setattr__(self, "points", tuple(pts))

    def __len__(self) -> int:
        return len(self.points)


def _clip01(lo: Fraction, hi: Fraction) -> Interval:
    lo, hi = max(lo, ZERO), min(hi, ONE)
    return (lo, hi) if lo <= hi else None


def free_interval(p: Vec, a: Vec, b: Vec, eps: Fraction, euclid: bool,
                  inner: bool = False, precision: Fraction = Fraction(1, 2**64)) -> Interval:
    """Parameters ``t`` in ``[0, 1]`` with ``d(p, a + t(b - a)) <= eps``.

    Exact for the max norm. For the Euclidean norm the result contains the
    true interval, or is contained in it when ``inner`` is set.
    """
    w = [x - y for x, y in zip(p, a)]
    d = [y - x for x, y in zip(a, b)]
    if not euclid:
        lo, hi = ZERO, ONE
        for wc, dc in zip(w, d):
            if dc == 0:
                if abs(wc) > eps:
                    return None
                continue
            t1, t2 = (wc - eps) / dc, (wc + eps) / dc
            if t1 > t2:
                t1, t2 = t2, t1
            lo, hi = max(lo, t1), min(hi, t2)
            if lo > hi:
                return None
        return (lo, hi)
    aa = sum((x * x for x in d), ZERO)
    cc = sum((x * x for x in w), ZERO) - eps * eps
    if aa == 0:
        return (ZERO, ONE) if cc <= 0 else None
    bb = sum((x * y for x, y in zip(w, d)), ZERO)
    disc = bb * bb - aa * cc
    if disc < 0:
        return None
    sl, sh = sqrt_enclosure(disc, precision)
    s = sl if inner else sh
    return _clip01((bb - s) / aa, (bb + s) / aa)


def _shift(iv: Interval, off: int) -> Interval:
    return None if iv is None else (iv[0] + off, iv[1] + off)


class _FreeSpace:
    def __init__(self, P: Sequence[Vec], Q: Sequence[Vec], eps: Fraction, euclid: bool,
                 inner: bool, precision: Fraction):
        n, m = len(P), len(Q)
        self.n, self.m = n, m
        fi = lambda p, a, b: free_interval(p, a, b, eps, euclid, inner, precision)
        # vertical edges: column i in 0..n, row r in 0..2m-1, absolute t
        self.vert = [[_shift(fi(P[i % n], Q[r % m], Q[(r + 1) % m]), r) for r in range(2 * m)]
                     for i in range(n + 1)]
        # horizontal edges: height r in 0..2m, column i in 0..n-1, absolute s
        self.horiz = [[_shift(fi(Q[r % m], P[i], P[(i + 1) % n]), i) for i in range(n)]
                      for r in range(2 * m + 1)]

    def candidates(self) -> List[Fraction]:
        m = self.m
        out = set(Fraction(r) for r in range(m + 1))
        for col in self.vert:
            for iv in col:
                if iv is None:
                    continue
                for e in iv:
                    for c in (e, e - m):
                        if 0 <= c <= m:
                            out.add(c)
        return sorted(out)

    def start_free(self, t0: Fraction) -> bool:
        r = min(int(t0), 2 * self.m - 1)
        iv = self.vert[0][r]
        return iv is not None and iv[0] <= t0 <= iv[1]

    def reachable(self, t0: Fraction) -> bool:
        n, m = self.n, self.m
        t_end = t0 + m
        r0 = min(int(t0), 2 * m - 1)
        r_top = min(2 * m - 1, int(t_end))
        rows = range(r0, r_top + 1)
        left = {r: None for r in rows}
        left[r0] = (t0, t0)
        for i in range(n):
            bottom: Interval = None
            new_left = {}
            for r in rows:
                L = left[r]
                fr = self.vert[i + 1][r]
                ft = self.horiz[r + 1][i]
                if bottom is not None:
                    right = fr
                elif L is not None and fr is not None and fr[1] >= L[0]:
                    right = (max(fr[0], L[0]), fr[1])
                else:
                    right = None
                if L is not None:
                    top = ft
                elif bottom is not None and ft is not None and ft[1] >= bottom[0]:
                    top = (max(ft[0], bottom[0]), ft[1])
                else:
                    top = None
                new_left[r] = right
                bottom = top
            left = new_left
            if all(v is None for v in left.values()):
                return False
        for r in (int(t_end), int(t_end) - 1):
            iv = left.get(r)
            if iv is not None and iv[0] <= t_end <= iv[1]:
                return True
        return False

    def decide(self) -> bool:
        return any(self.reachable(t0) for t0 in self.candidates() if self.start_free(t0))


def _points(C) -> List[Vec]:
    pts = list(C.points if isinstance(C, ClosedCurve) else C)
    pts = [tuple(as_rat(c) for c in p) for p in pts]
    if len(pts) > 1 and pts[0] == pts[-1]:
        pts.pop()
    return pts


def frechet_decision(P, Q, eps, space, inner: bool = False,
                     precision: Fraction = Fraction(1, 2**64)) -> bool:
    """Whether the closed-curve Fréchet distance is at most ``eps``.

    Exact for the max norm. For the Euclidean norm the answer is a one-sided
    relaxation: ``inner=False`` may answer yes wrongly (never no wrongly),
    ``inner=True`` the reverse.
    """
    eps = as_rat(eps)
    if eps < 0:
        return False
    euclid = isinstance(space, Euclidean)
    return _FreeSpace(_points(P), _points(Q), eps, euclid, inner, precision).decide()


def _critical_snap(ps, qs, space, lo, hi):
    """Narrow ``[lo, hi]`` by deciding at vertex-vertex and vertex-edge distances.

    The distance is often one of these values, in which case the result is
    exact; otherwise the bracket only shrinks.
    """
    from .hausdorff import maxnorm_point_triangle

    cands = set()
    for A, B in ((ps, qs), (qs, ps)):
        for p in A:
            for i in range(len(B)):
                a, b = B[i], B[(i + 1) % len(B)]
                cands.add(max_dist(p, a))
                cands.add(maxnorm_point_triangle(p, (a, b, b)))
    vals = sorted(c for c in cands if lo < c < hi)
    i, j = 0, len(vals)
    # smallest feasible candidate by bisection on the sorted list
    while i < j:
        mid = (i + j) // 2
        if frechet_decision(ps, qs, vals[mid], space):
            j = mid
        else:
            i = mid + 1
    if i < len(vals):
        hi = vals[i]
    if i > 0:
        lo = vals[i - 1]
    return lo, hi


def closed_curve_frechet(P, Q, tol, space=None) -> Enclosure:
    """Enclosure of width at most ``tol`` of the closed-curve Fréchet distance.

    ``P`` and ``Q`` are :class:`ClosedCurve` objects or plain vertex lists
    (then ``space`` is required). Reparametrisations are orientation
    preserving with a free base point.
    """
    tol = as_rat(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    if space is None:
        space = P.space
    if isinstance(space, Table):
        raise ValueError("closed curves need a vector space")
    euclid = isinstance(space, Euclidean)
    ps, qs = _points(P), _points(Q)
    if euclid:
        worst = max(sq_dist(p, q) for p in ps for q in qs)
        hi = sqrt_enclosure(worst, tol / 4)[1]
    else:
        hi = max(max_dist(p, q) for p in ps for q in qs)
    lo = ZERO
    if hi == 0:
        return Enclosure.exact(ZERO, stamp={"tol": tol})
    if not euclid and frechet_decision(ps, qs, ZERO, space):
        return Enclosure.exact(ZERO, stamp={"tol": tol})
    if not euclid:
        lo, hi = _critical_snap(ps, qs, space, lo, hi)
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if not euclid:
            if frechet_decision(ps, qs, mid, space):
                hi = mid
            else:
                lo = mid
            continue
        prec = Fraction(1, 2**64)
        nudge = 0
        while True:
            if frechet_decision(ps, qs, mid, space, inner=True, precision=prec):
                hi = mid
                break
            if not frechet_decision(ps, qs, mid, space, inner=False, precision=prec):
                lo = mid
                break
            # mid sits within rounding of a critical value: sharpen, then move off it
            if prec > Fraction(1, 2**256):
                prec /= 2**64
            else:
                nudge += 1
                mid = lo + (hi - lo) * Fraction(2**nudge + 1, 2**(nudge + 1))
                prec = Fraction(1, 2**64)
    return Enclosure.between(lo, hi, stamp={"tol": tol})


def curve_hausdorff(P, Q, space, tol) -> Enclosure:
    """Hausdorff distance of the images of two closed polylines."""
    from .hausdorff import hausdorff_triangles

    def segs(C):
        pts = _points(C)
        return [(pts[i], pts[(i + 1) % len(pts)], pts[(i + 1) % len(pts)]) for i in range(len(pts))]
    return hausdorff_triangles(segs(P), segs(Q), space, as_rat(tol))
