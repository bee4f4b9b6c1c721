"""Membership tests for orientation-preserving automorphisms of the square.

``certify_homeomorphism`` is a sufficient condition (positive orientation of
every triangle plus a strictly monotone boundary of degree one);
``falsify_pseudoautomorphism`` searches for an exact witness that a map lies
outside the closure of the automorphisms. The remaining helpers build the
finite candidate nets used by the lower-bound search.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from . import geometry as geo
from .degree import (
    CellRegion,
    DegreeQuery,
    DegreeUndefined,
    covers,
    degree,
    degree_triangle_sum,
    image_hulls,
    pieces,
)
from .plmap import (
    GridMap,
    Modulus,
    boundary_points,
    boundary_vertex_indices,
    eval_map,
    grid_vertices,
    lipschitz_constant,
    triangles,
    vertex_index,
)
from .scalar import as_rat, format_rat

Pt = Tuple[Fraction, Fraction]

ZERO, ONE = Fraction(0), Fraction(1)

BOTTOM, RIGHT, TOP, LEFT = range(4)


# ---------------------------------------------------------------------------
# boundary combinatorics


def sides_of(p: Pt) -> frozenset:
    """Sides of the unit square containing ``p`` (empty if ``p`` is not on the boundary)."""
    x, y = p
    if not (0 <= x <= 1 and 0 <= y <= 1):
        return frozenset()
    out = set()
    if y == 0:
        out.add(BOTTOM)
    if x == 1:
        out.add(RIGHT)
    if y == 1:
        out.add(TOP)
    if x == 0:
        out.add(LEFT)
    return frozenset(out)


def on_boundary(p: Pt) -> bool:
    return bool(sides_of(p))


def _side_param(side: int, p: Pt) -> Fraction:
    x, y = p
    return (x, y, 1 - x, 1 - y)[side]


def perimeter_param(p: Pt) -> Fraction:
    """Counter-clockwise arclength position in ``[0, 4)`` from the origin corner."""
    x, y = p
    if y == 0:
        return x
    if x == 1:
        return 1 + y
    if y == 1:
        return 3 - x
    if x == 0:
        return 4 - y
    raise ValueError(f"{p} is not on the boundary")


def boundary_movement(p: Pt, q: Pt) -> Optional[Fraction]:
    """Signed counter-clockwise movement from ``p`` to ``q`` along a common side.

    ``None`` if the segment ``pq`` is not contained in the boundary.
    """
    if p == q:
        return ZERO if on_boundary(p) else None
    common = sides_of(p) & sides_of(q)
    if not common:
        return None
    side = min(common)
    return _side_param(side, q) - _side_param(side, p)


def boundary_edges(k: int) -> List[Tuple[int, int]]:
    idx = boundary_vertex_indices(k)
    return [(idx[i], idx[(i + 1) % len(idx)]) for i in range(len(idx))]


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class OrientationCert:
    """Witness that a grid map is a PL orientation-preserving homeomorphism."""

    k: int
    determinants: Tuple[Fraction, ...]
    itinerary: Tuple[Fraction, ...]
    increments: Tuple[Fraction, ...]

    def summary(self) -> dict:
        return {
            "k": self.k,
            "min_determinant": format_rat(min(self.determinants)),
            "triangles": len(self.determinants),
            "itinerary": [format_rat(p) for p in self.itinerary],
            "increments": [format_rat(p) for p in self.increments],
        }


def triangle_determinants(M: GridMap) -> List[Fraction]:
    imgs = M.images
    return [geo.orient(*(imgs[v] for v in t.verts)) for t in triangles(M.k)]


def certify_homeomorphism(M: GridMap) -> Union[OrientationCert, List[str]]:
    """Return an :class:`OrientationCert` or the list of failure reasons."""
    reasons = []
    dets = triangle_determinants(M)
    tris = triangles(M.k)
    for t, d in zip(tris, dets):
        if d <= 0:
            kind = "negative" if d < 0 else "zero"
            reasons.append(f"{kind} determinant on triangle {(t.i, t.j, 'upper' if t.upper else 'lower')}")
    idx = boundary_vertex_indices(M.k)
    imgs = [M.images[i] for i in idx]
    itinerary = []
    for i, p in zip(idx, imgs):
        if not on_boundary(p):
            reasons.append(f"boundary vertex {i} maps to interior point {p}")
    incs = []
    if not any(r.startswith("boundary vertex") for r in reasons):
        itinerary = [perimeter_param(p) for p in imgs]
        for a, (p, q) in enumerate(zip(imgs, imgs[1:] + imgs[:1])):
            mv = boundary_movement(p, q)
            if mv is None:
                reasons.append(f"boundary edge {a} leaves the boundary")
            elif mv <= 0:
                reasons.append(f"boundary edge {a} is not strictly increasing")
            else:
                incs.append(mv)
        if len(incs) == len(imgs) and sum(incs) != 4:
            reasons.append(f"boundary winds {sum(incs) / 4} times")
    if reasons:
        return reasons
    return OrientationCert(M.k, tuple(dets), tuple(itinerary), tuple(incs))


def is_certified(M: GridMap) -> bool:
    return isinstance(certify_homeomorphism(M), OrientationCert)


# ---------------------------------------------------------------------------
# falsification


@dataclass(frozen=True)
class Violation:
    """An exact witness that a map violates one pseudo-automorphism condition.

    ``kind`` is one of ``NotBoundaryPreserving``, ``BoundaryNotMonotone``,
    ``NotSurjective``, ``DegreeSum``.
    """

    kind: str
    witness: dict = field(hash=False)

    def to_json(self) -> dict:
        return {"kind": self.kind, "witness": _jsonable(self.witness)}


@dataclass(frozen=True)
class NoViolationAtResolution:
    resolution: int

    def to_json(self) -> dict:
        return {"kind": "NoViolationAtResolution", "resolution": self.resolution}


def _jsonable(x):
    if isinstance(x, Fraction):
        return format_rat(x)
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _check_boundary_preserving(M: GridMap) -> List[Violation]:
    out = []
    pts = boundary_points(M.k)
    idx = boundary_vertex_indices(M.k)
    imgs = [M.images[i] for i in idx]
    for x, fx in zip(pts, imgs):
        if not on_boundary(fx):
            out.append(Violation("NotBoundaryPreserving", {"point": x, "image": fx}))
    if out:
        return out
    n = len(pts)
    for a in range(n):
        p, q = imgs[a], imgs[(a + 1) % n]
        if boundary_movement(p, q) is None:
            x = geo.lerp(pts[a], pts[(a + 1) % n], Fraction(1, 2))
            out.append(Violation("NotBoundaryPreserving", {"point": x, "image": eval_map(M, x)}))
    return out


def _check_monotone(M: GridMap) -> List[Violation]:
    pts = boundary_points(M.k)
    idx = boundary_vertex_indices(M.k)
    imgs = [M.images[i] for i in idx]
    n = len(pts)
    out = []
    total = ZERO
    for a in range(n):
        b, c = (a + 1) % n, (a + 2) % n
        mv = boundary_movement(imgs[a], imgs[b])
        total += mv
        if mv < 0:
            out.append(Violation("BoundaryNotMonotone", {
                "reason": "backward",
                "points": [pts[a], pts[b], pts[c]],
                "images": [imgs[a], imgs[b], imgs[c]],
            }))
    if not out and total != 4:
        out.append(Violation("BoundaryNotMonotone", {
            "reason": "degree",
            "points": pts,
            "images": imgs,
            "total": total,
        }))
    return out


def _square(centre: Pt, radius: Fraction) -> List[Pt]:
    cx, cy = centre
    return [(cx - radius, cy - radius), (cx + radius, cy - radius),
            (cx + radius, cy + radius), (cx - radius, cy + radius)]


def _missed_ball_proof(hulls, centre: Pt, radius: Fraction):
    sq = _square(centre, radius)
    proof = []
    for h in hulls:
        sep = geo.separating_axis(h, sq)
        if sep is None:
            return None
        proof.append({"axis": sep[0], "image_max": sep[1], "ball_min": sep[2]})
    return proof


def _check_surjective(M: GridMap, res: int) -> List[Violation]:
    hulls = image_hulls(M)
    verts = M.images
    whole = CellRegion.whole(1)
    out = []
    for b in range(res):
        for a in range(res):
            lo = (Fraction(a, res), Fraction(b, res))
            hi = (Fraction(a + 1, res), Fraction(b + 1, res))
            if any(lo[0] <= v[0] <= hi[0] and lo[1] <= v[1] <= hi[1] for v in verts):
                continue
            centre = ((lo[0] + hi[0]) / 2, (lo[1] + hi[1]) / 2)
            try:
                if degree(DegreeQuery(M, whole, centre)).value != 0:
                    continue
            except DegreeUndefined:
                pass
            radius = Fraction(1, 2 * res)
            found = None
            for level in range(3):
                n = 2 ** level
                r = radius / n
                for sb in range(n):
                    for sa in range(n):
                        c = (lo[0] + (2 * sa + 1) * r, lo[1] + (2 * sb + 1) * r)
                        proof = _missed_ball_proof(hulls, c, r)
                        if proof is not None:
                            found = Violation("NotSurjective", {"centre": c, "radius": r, "proof": proof})
                            break
                    if found:
                        break
                if found:
                    break
            if found:
                out.append(found)
    return out


def degree_support(M: GridMap, res: int, y: Pt) -> CellRegion:
    cells = [(i, j) for j in range(res) for i in range(res)
             if covers(M, CellRegion(res, frozenset({(i, j)})), y)]
    return CellRegion(res, frozenset(cells)) if cells else None


def _check_degree_sums(M: GridMap, res: int) -> List[Violation]:
    """Degree-sum condition on the components of each cell-centre preimage support.

    Components are edge-connected, so they are disjoint open sets whose union
    has boundary equal to the union of their boundaries. Any nonempty
    subfamily of well-posed components is admissible, and all of them sum to
    one only if there is exactly one such component, of degree one.
    """
    out = []
    for b in range(res):
        for a in range(res):
            y = (Fraction(2 * a + 1, 2 * res), Fraction(2 * b + 1, 2 * res))
            support = degree_support(M, res, y)
            if support is None:
                continue
            comps = []
            for c in support.components():
                try:
                    comps.append((c, degree(DegreeQuery(M, c, y)).value))
                except DegreeUndefined:
                    continue
            if not comps or (len(comps) == 1 and comps[0][1] == 1):
                continue
            bad = next(([c] for c in comps if c[1] != 1), comps[:2])
            out.append(Violation("DegreeSum", {
                "target": y,
                "resolution": res,
                "family": [sorted(c.cells) for c, _ in bad],
                "degrees": [d for _, d in bad],
            }))
    return out


def falsify_pseudoautomorphism(M: GridMap, resolution: int, collect_all: bool = False):
    """First violated pseudo-automorphism condition at ``resolution``, with witness.

    Conditions are tested in order: boundary preservation, monotone degree-one
    boundary, surjectivity, degree sums. With ``collect_all`` every violation
    found is returned as a list (possibly empty) instead.
    """
    if resolution < 1:
        raise ValueError("resolution must be at least 1")
    found: List[Violation] = []
    bp = _check_boundary_preserving(M)
    found += bp
    if found and not collect_all:
        return found[0]
    if not bp:
        found += _check_monotone(M)
        if found and not collect_all:
            return found[0]
    found += _check_surjective(M, resolution)
    if found and not collect_all:
        return found[0]
    found += _check_degree_sums(M, resolution)
    if collect_all:
        return found
    return found[0] if found else NoViolationAtResolution(resolution)


def recheck_violation(v: Violation, M: GridMap) -> bool:
    """Re-verify a witness against the map by direct evaluation."""
    w = v.witness
    if v.kind == "NotBoundaryPreserving":
        x, fx = w["point"], w["image"]
        return on_boundary(x) and eval_map(M, x) == fx and not on_boundary(fx)
    if v.kind == "BoundaryNotMonotone":
        imgs = w["images"]
        if any(eval_map(M, p) != q for p, q in zip(w["points"], imgs)):
            return False
        if w["reason"] == "backward":
            mv = boundary_movement(imgs[0], imgs[1])
            return mv is not None and mv < 0
        moves = [boundary_movement(p, q) for p, q in zip(imgs, imgs[1:] + imgs[:1])]
        return all(m is not None and m >= 0 for m in moves) and sum(moves) != 4
    if v.kind == "NotSurjective":
        c, r = w["centre"], w["radius"]
        sq = _square(c, r)
        imgs = M.images
        for t, pr in zip(triangles(M.k), w["proof"]):
            ax = pr["axis"]
            tri = [imgs[i] for i in t.verts]
            if not max(ax[0] * p[0] + ax[1] * p[1] for p in tri) < min(ax[0] * q[0] + ax[1] * q[1] for q in sq):
                return False
        return len(w["proof"]) == len(triangles(M.k))
    if v.kind == "DegreeSum":
        y = w["target"]
        res = w["resolution"]
        fam = [set(map(tuple, cells)) for cells in w["family"]]
        for a in range(len(fam)):
            for b in range(a + 1, len(fam)):
                # members must be disjoint and share no cell edge
                if any((i + di, j + dj) in fam[b] for i, j in fam[a]
                       for di, dj in ((0, 0), (1, 0), (-1, 0), (0, 1), (0, -1))):
                    return False
        degs = []
        for cells in w["family"]:
            U = CellRegion(res, frozenset(map(tuple, cells)))
            q = DegreeQuery(M, U, y)
            if not q.well_posed() or not covers(M, U, y):
                return False
            degs.append(degree_triangle_sum(q))
        return degs == list(w["degrees"]) and sum(degs) != 1
    raise ValueError(f"unknown violation kind {v.kind!r}")


# ---------------------------------------------------------------------------
# schedule


class ScheduleTooLarge(ValueError):
    """The Lipschitz schedule constant is too large to materialise."""


MAX_ALPHA = 24
MAX_MATERIALISED_ALPHA = 12


def lemma4_constant(n: int) -> int:
    """``4^n * 4^(4^n) * (3 * 4^n + 3) + 1`` as an exact integer."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > MAX_MATERIALISED_ALPHA:
        raise ScheduleTooLarge(f"4^(4^{n}) has {2 * 4 ** n} bits; refusing to materialise")
    p = 4 ** n
    return p * (1 << (2 * p)) * (3 * p + 3) + 1


@dataclass(frozen=True)
class SearchSchedule:
    n: int
    mu_A: Modulus
    mu_B: Modulus

    @property
    def alpha(self) -> int:
        return self.mu_A.rule(self.n + 1) + self.mu_B.rule(self.n + 1)

    @property
    def L(self) -> int:
        return schedule_L(self.n, self.mu_A, self.mu_B)

    def admits_lipschitz(self, lip: Fraction) -> bool:
        """Exact test ``lip <= L`` without materialising huge ``L``."""
        a = self.alpha
        if a > MAX_ALPHA:
            raise ScheduleTooLarge(f"alpha = {a} exceeds {MAX_ALPHA}")
        if a <= MAX_MATERIALISED_ALPHA:
            return lip <= self.L
        # L > 2**(2 * 4**a) while lip has far fewer bits
        lip = as_rat(lip)
        return lip.numerator.bit_length() - lip.denominator.bit_length() + 1 < 2 * 4 ** a


def schedule_L(n: int, mu_A: Modulus, mu_B: Modulus) -> int:
    """Lipschitz bound ``L_n`` for ``alpha = mu_A(n+1) + mu_B(n+1)``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    a = mu_A.rule(n + 1) + mu_B.rule(n + 1)
    if a > MAX_ALPHA:
        raise ScheduleTooLarge(f"alpha = {a} exceeds {MAX_ALPHA}; use desk-scale n")
    return lemma4_constant(a)


# ---------------------------------------------------------------------------
# snapping


class RefinementRequired(ValueError):
    """Quantisation at this precision cannot keep the map certified."""

    def __init__(self, n: int):
        super().__init__(f"snapping cannot preserve orientation; retry with n = {n}")
        self.n = n


def _snap_options(p: Pt, q: Fraction, boundary: bool) -> List[Pt]:
    def opts(c):
        lo = (c / q).__floor__() * q
        hi = (c / q).__ceil__() * q
        near = round(c / q) * q
        return [near] + [v for v in (lo, hi) if v != near]

    x, y = p
    cands = [(a, b) for a in opts(x) for b in opts(y)]
    if boundary:
        cands = [c for c in cands if sides_of(c) & sides_of(p)] or cands[:1]
    return sorted(set(cands), key=lambda c: (max(abs(c[0] - x), abs(c[1] - y)), c))


def lipschitz_snap(M: GridMap, n: int, max_rounds: int = 200) -> GridMap:
    """Quantise vertex images to the ``2^-n`` grid keeping the map certified.

    Every vertex moves by less than ``2^-n`` in each coordinate, so the result
    is within sup-distance (hence graph distance) ``2^-n`` of ``M``.
    """
    if not is_certified(M):
        raise ValueError("lipschitz_snap needs a certified homeomorphism")
    q = Fraction(1, 2 ** n)
    bset = set(boundary_vertex_indices(M.k))
    options = [_snap_options(p, q, i in bset) for i, p in enumerate(M.images)]
    choice = [0] * len(options)

    def build():
        return GridMap(M.k, tuple(o[c] for o, c in zip(options, choice)))

    def failures(G):
        r = certify_homeomorphism(G)
        return 0 if isinstance(r, OrientationCert) else len(r)

    G = build()
    bad = failures(G)
    rounds = 0
    while bad and rounds < max_rounds:
        rounds += 1
        best = None
        for v in range(len(options)):
            for c in range(len(options[v])):
                if c == choice[v]:
                    continue
                old = choice[v]
                choice[v] = c
                f = failures(build())
                choice[v] = old
                if f < bad and (best is None or f < best[0]):
                    best = (f, v, c)
        if best is None:
            raise RefinementRequired(n + 1)
        bad, v, c = best
        choice[v] = c
        G = build()
    if bad:
        raise RefinementRequired(n + 1)
    if n <= MAX_MATERIALISED_ALPHA and lipschitz_constant(G) > lemma4_constant(n):
        raise RefinementRequired(n + 1)
    return G


# ---------------------------------------------------------------------------
# candidate nets


class NetTooLarge(ValueError):
    pass


def _grid_points(N: int) -> List[Pt]:
    return sorted((Fraction(a, N), Fraction(b, N)) for a in range(N + 1) for b in range(N + 1))


def enumerate_net(k: int, delta, schedule: Optional[SearchSchedule] = None,
                  strict: bool = False, cap: Optional[int] = None) -> Iterator[GridMap]:
    """All k-grid maps with vertex images in ``delta Z`` passing the closure filters.

    Filters: boundary vertices on the boundary, boundary edges inside the
    boundary with non-negative counter-clockwise movement summing to one
    full turn, no negatively oriented triangle (zero allowed unless
    ``strict``), Lipschitz constant admitted by ``schedule``. Maps come out in
    lexicographic order of their vertex-image tuples.
    """
    delta = as_rat(delta)
    if k < 1:
        raise ValueError("k must be at least 1")
    if delta <= 0 or (1 / delta).denominator != 1:
        raise ValueError("1/delta must be a positive integer")
    N = int(1 / delta)
    pts = _grid_points(N)
    bpts = [p for p in pts if on_boundary(p)]
    nv = (k + 1) ** 2
    bset = set(boundary_vertex_indices(k))
    tri_at: Dict[int, List[Tuple[int, int, int]]] = {v: [] for v in range(nv)}
    for t in triangles(k):
        tri_at[max(t.verts)].append(t.verts)
    edge_at: Dict[int, List[Tuple[int, int]]] = {v: [] for v in range(nv)}
    for a, b in boundary_edges(k):
        edge_at[max(a, b)].append((a, b))

    images: List[Optional[Pt]] = [None] * nv
    emitted = 0

    def rec(v: int, turned: Fraction):
        nonlocal emitted
        if v == nv:
            if turned != 4:
                return
            G = GridMap(k, tuple(images))
            if schedule is not None and not schedule.admits_lipschitz(lipschitz_constant(G)):
                return
            emitted += 1
            if cap is not None and emitted > cap:
                raise NetTooLarge(f"net exceeds cap of {cap} maps")
            yield G
            return
        for p in (bpts if v in bset else pts):
            images[v] = p
            ok = True
            t_new = turned
            for a, b in edge_at[v]:
                mv = boundary_movement(images[a], images[b])
                if mv is None or mv < 0:
                    ok = False
                    break
                t_new += mv
            if ok and t_new > 4:
                ok = False
            if ok:
                for tv in tri_at[v]:
                    d = geo.orient(*(images[i] for i in tv))
                    if d < 0 or (strict and d == 0):
                        ok = False
                        break
            if ok:
                yield from rec(v + 1, t_new)
        images[v] = None

    yield from rec(0, ZERO)


def net_density_premise(schedule: SearchSchedule, k: int, delta) -> bool:
    """Whether the k-grid, ``delta``-quantised net is ``2^-alpha`` dense (sup norm)
    around every ``L``-Lipschitz map, so that net minima certify lower bounds.

    PL interpolation of an ``L``-Lipschitz map on a k-grid errs by at most
    ``L/k``; quantisation adds at most ``delta``.
    """
    delta = as_rat(delta)
    a = schedule.alpha
    if a > MAX_MATERIALISED_ALPHA:
        return False
    return Fraction(schedule.L, k) + delta <= Fraction(1, 2 ** a)
