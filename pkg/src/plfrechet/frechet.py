"""Fréchet distance of PL grid surfaces: objective, bound sources and driver.

The distance is ``inf over (phi, psi) of max_x d(A(phi(x)), B(psi(x)))``
with ``phi, psi`` orientation-preserving automorphisms of the square (or
limits of them). Upper bounds come from certified PL homeomorphisms only.
Lower bounds come from relaxations that every admissible pair must respect
(image Hausdorff distance, boundary-curve Fréchet distance) and from finite
net minima, which are only trusted when the net is provably dense enough.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor, gcd
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from . import geometry as geo
from .autocert import (
    NetTooLarge,
    SearchSchedule,
    ScheduleTooLarge,
    boundary_edges,
    boundary_movement,
    enumerate_net,
    is_certified,
    net_density_premise,
    sides_of,
)
from .curves import closed_curve_frechet
from .hausdorff import hausdorff_triangles
from .kernels import PackedSurface, sampled_objective
from .plmap import (
    GridMap,
    GridSurface,
    affine_parts,
    boundary_vertex_indices,
    eval_pl,
    grid_vertices,
    modulus_of,
    rotation_map,
    triangles,
    vertex_index,
)
from .scalar import (
    Enclosure,
    Euclidean,
    MaxNorm,
    Table,
    as_rat,
    enclosure_tighten,
    format_rat,
    max_dist,
    sq_dist,
    sqrt_enclosure,
)

Pt = Tuple[Fraction, Fraction]

ZERO = Fraction(0)
DEFAULT_TOL = Fraction(1, 1024)


@dataclass(frozen=True)
class ObjectivePair:
    A: GridSurface
    B: GridSurface
    phi: GridMap
    psi: GridMap

    def __post_init__(self):
        if self.A.space != self.B.space:
            raise ValueError("surfaces live in different spaces")


# ---------------------------------------------------------------------------
# objective


def _affine(values, k: int, t):
    """Coefficients ``(jx, jy, g)`` with ``f(x, y) = jx x + jy y + g`` on ``t``."""
    f00, jx, jy = affine_parts(values, k, t)
    x0, y0 = Fraction(t.i, k), Fraction(t.j, k)
    g = tuple(a - x0 * b - y0 * c for a, b, c in zip(f00, jx, jy))
    return jx, jy, g


def _apply(aff, p: Pt):
    jx, jy, g = aff
    return tuple(a * p[0] + b * p[1] + c for a, b, c in zip(jx, jy, g))


def _pullback(line, aff):
    a, b, c = line
    jx, jy, g = aff
    return (a * jx[0] + b * jx[1], a * jy[0] + b * jy[1], a * g[0] + b * g[1] + c)


def _crosses(poly, line) -> bool:
    vals = [geo.line_value(line, p) for p in poly]
    return min(vals) < 0 < max(vals)


def _tri_dom(k: int, t):
    verts = grid_vertices(k)
    return [verts[v] for v in t.verts]


def _overlay_faces(k1: int, k2: int):
    """Convex faces of the common refinement of two grid triangulations,
    each with the pair of triangles it lies in."""
    t2_by_cell: Dict[Tuple[int, int], list] = {}
    for t in triangles(k2):
        t2_by_cell.setdefault((t.i, t.j), []).append(t)
    out = []
    for t1 in triangles(k1):
        d1 = _tri_dom(k1, t1)
        xs = [p[0] for p in d1]
        ys = [p[1] for p in d1]
        irange = range(max(0, floor(min(xs) * k2)), min(k2, ceil(max(xs) * k2)))
        jrange = range(max(0, floor(min(ys) * k2)), min(k2, ceil(max(ys) * k2)))
        for i in irange:
            for j in jrange:
                for t2 in t2_by_cell.get((i, j), ()):
                    poly = geo.clip_convex(d1, _tri_dom(k2, t2))
                    if len(poly) >= 3 and geo.polygon_area2(poly) != 0:
                        out.append((poly, t1, t2))
    return out


def _exact_max(pair: ObjectivePair, euclid: bool) -> Tuple[Fraction, Pt]:
    """Exact max over the square of the distance (squared if ``euclid``) and a maximiser."""
    A, B, phi, psi = pair.A, pair.B, pair.phi, pair.psi
    lines_a = geo.grid_lines(A.m)
    lines_b = geo.grid_lines(B.m)
    best, arg = None, None
    cache: Dict[Pt, Fraction] = {}
    for poly, t1, t2 in _overlay_faces(phi.k, psi.k):
        f = _affine(phi.images, phi.k, t1)
        g = _affine(psi.images, psi.k, t2)
        cuts = [ln for ln in (_pullback(l, f) for l in lines_a) if _crosses(poly, ln)]
        cuts += [ln for ln in (_pullback(l, g) for l in lines_b) if _crosses(poly, ln)]
        for x in geo.arrangement_points(poly, cuts):
            v = cache.get(x)
            if v is None:
                a = eval_pl(A.samples, A.m, _apply(f, x))
                b = eval_pl(B.samples, B.m, _apply(g, x))
                v = sq_dist(a, b) if euclid else max_dist(a, b)
                cache[x] = v
            if best is None or v > best:
                best, arg = v, x
    return best, arg


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _table_objective(pair: ObjectivePair) -> Fraction:
    A, B, phi, psi = pair.A, pair.B, pair.phi, pair.psi
    G = _lcm(phi.k, psi.k)
    table = A.space
    best = ZERO
    for p in grid_vertices(G):
        fa = eval_pl(phi.images, phi.k, p)
        fb = eval_pl(psi.images, psi.k, p)
        ia, ja = fa[0] * A.m, fa[1] * A.m
        ib, jb = fb[0] * B.m, fb[1] * B.m
        if any(c.denominator != 1 for c in (ia, ja, ib, jb)):
            raise ValueError(
                "table-space objective needs every sample to map onto surface grid vertices; "
                f"{p} maps to {fa} and {fb}")
        a = A.samples[vertex_index(A.m, int(ia), int(ja))]
        b = B.samples[vertex_index(B.m, int(ib), int(jb))]
        best = max(best, table.distances[a][b])
    return best


def objective(pair: ObjectivePair, tol=DEFAULT_TOL) -> Enclosure:
    """Enclosure of ``max_x d(A(phi(x)), B(psi(x)))`` of width at most ``tol``.

    On each face of the overlay of both map triangulations, refined by the
    pulled-back surface triangulations, ``A o phi - B o psi`` is affine and
    the norm of an affine function is convex, so the maximum sits at a face
    vertex. The value is therefore exact for max-norm spaces; Euclidean
    values are exact up to the final square root. Table-space surfaces are
    defined only at grid vertices, so their objective is the maximum over
    the vertices of the maps' common grid, all of which must land on
    surface vertices.
    """
    tol = as_rat(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    space = pair.A.space
    if isinstance(space, Table):
        return Enclosure.exact(_table_objective(pair), stamp={"method": "table-vertices"})
    if isinstance(space, Euclidean):
        sq, _ = _exact_max(pair, euclid=True)
        lo, hi = sqrt_enclosure(sq, tol / 2)
        return Enclosure.between(lo, hi, stamp={"method": "arrangement", "tol": tol})
    v, _ = _exact_max(pair, euclid=False)
    return Enclosure.exact(v, stamp={"method": "arrangement"})


def objective_sampled(pair: ObjectivePair, tol=DEFAULT_TOL, max_mesh: int = 256) -> Enclosure:
    """Sampling enclosure: mesh maximum plus a Lipschitz allowance.

    Lower bound is the exact maximum over a uniform vertex mesh of spacing
    ``h``; the upper bound adds ``(L_A L_phi + L_B L_psi) h``, since every
    point is within max-distance ``h`` of a mesh vertex. The mesh is doubled
    until the width is at most ``tol`` or ``max_mesh`` is reached.
    """
    from .plmap import lipschitz_constant

    tol = as_rat(tol)
    space = pair.A.space
    if isinstance(space, Table):
        return objective(pair, tol)
    euclid = isinstance(space, Euclidean)
    slope = (lipschitz_constant(pair.A) * lipschitz_constant(pair.phi)
             + lipschitz_constant(pair.B) * lipschitz_constant(pair.psi))
    N = _lcm(pair.phi.k, pair.psi.k)
    while True:
        best = ZERO
        for p in grid_vertices(N):
            a = eval_pl(pair.A.samples, pair.A.m, eval_pl(pair.phi.images, pair.phi.k, p))
            b = eval_pl(pair.B.samples, pair.B.m, eval_pl(pair.psi.images, pair.psi.k, p))
            best = max(best, sq_dist(a, b) if euclid else max_dist(a, b))
        lo = sqrt_enclosure(best, tol / 4)[0] if euclid else best
        hi = (sqrt_enclosure(best, tol / 4)[1] if euclid else best) + slope / N
        if hi - lo <= tol or N >= max_mesh:
            return Enclosure.between(lo, hi, stamp={"method": "mesh", "mesh": N})
        N *= 2


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class BoundEntry:
    """One bound with the parameters needed to re-derive it.

    ``provenance`` is ``CertifiedPair``, ``NetMinimum``, ``HausdorffImages``,
    ``BoundaryCurves`` or ``Trivial``.
    """

    side: str
    value: Fraction
    provenance: str
    params: dict = field(default_factory=dict, hash=False)
    elapsed: float = 0.0
    certified: bool = True

    def to_json(self) -> dict:
        return {
            "side": self.side,
            "value": format_rat(self.value),
            "provenance": self.provenance,
            "params": _jsonable(self.params),
            "elapsed_s": round(self.elapsed, 6),
            "certified": self.certified,
        }


def _jsonable(x):
    if isinstance(x, Fraction):
        return format_rat(x)
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


@dataclass
class BoundReport:
    enclosure: Enclosure
    entries: List[BoundEntry] = field(default_factory=list)
    excluded: List[BoundEntry] = field(default_factory=list)
    converged: bool = False
    best_pair: Optional[Tuple[GridMap, GridMap]] = None

    def add(self, entry: BoundEntry) -> bool:
        """Record ``entry`` if it tightens the enclosure; returns whether it did.

        Heuristic (uncertified) entries are kept aside and never tighten.
        """
        if not entry.certified:
            self.excluded.append(entry)
            return False
        before = self.enclosure
        if entry.side == "lower":
            self.enclosure = enclosure_tighten(before, new_lower=entry.value, stamp=entry.provenance)
        else:
            self.enclosure = enclosure_tighten(before, new_upper=entry.value, stamp=entry.provenance)
        if self.enclosure is before:
            return False
        self.entries.append(entry)
        return True

    def snapshot(self) -> "BoundReport":
        return BoundReport(self.enclosure, list(self.entries), list(self.excluded),
                           self.converged, self.best_pair)

    def to_json(self) -> dict:
        e = self.enclosure
        return {
            "lower": None if e.lo is None else format_rat(e.lo),
            "upper": None if e.hi is None else format_rat(e.hi),
            "width": None if e.width is None else format_rat(e.width),
            "converged": self.converged,
            "entries": [x.to_json() for x in self.entries],
            "excluded": [x.to_json() for x in self.excluded],
        }


# ---------------------------------------------------------------------------
# upper bounds


def _screen_mesh(pair_k: int, A: GridSurface, B: GridSurface) -> int:
    base = _lcm(_lcm(pair_k, A.m), B.m)
    n = base
    while n < 32:
        n *= 2
    return min(n, 4 * base if base >= 32 else n)


class _Screen:
    """Float ranking of candidate pairs (never reported as a bound)."""

    def __init__(self, A: GridSurface, B: GridSurface, k: int):
        self.table = isinstance(A.space, Table)
        if not self.table:
            self.pa, self.pb = PackedSurface(A), PackedSurface(B)
        self.A, self.B = A, B
        self.n = _screen_mesh(k, A, B)
        self.evals = 0

    def __call__(self, phi: GridMap, psi: GridMap) -> float:
        self.evals += 1
        if self.table:
            try:
                return float(_table_objective(ObjectivePair(self.A, self.B, phi, psi)))
            except ValueError:
                return float("inf")
        return sampled_objective(self.pa, self.pb, phi, psi, self.n)


_INCIDENCE: Dict[int, tuple] = {}


def _incidence(k: int):
    """Per vertex: incident triangles and incident boundary edges."""
    if k not in _INCIDENCE:
        tris = {v: [] for v in range((k + 1) ** 2)}
        for t in triangles(k):
            for v in t.verts:
                tris[v].append(t.verts)
        edges = {v: [] for v in range((k + 1) ** 2)}
        for a, b in boundary_edges(k):
            edges[a].append((a, b))
            edges[b].append((a, b))
        _INCIDENCE[k] = (tris, edges, frozenset(boundary_vertex_indices(k)))
    return _INCIDENCE[k]


def _move_ok(imgs: List[Pt], k: int, v: int) -> bool:
    """Whether a certified map stays certified after changing vertex ``v`` only.

    Only the triangles and boundary edges touching ``v`` can change; a side
    vertex that keeps both neighbouring boundary moves strictly positive
    keeps the boundary a degree-one monotone loop.
    """
    tris, edges, _ = _incidence(k)
    for tv in tris[v]:
        if geo.orient(*(imgs[i] for i in tv)) <= 0:
            return False
    for a, b in edges[v]:
        mv = boundary_movement(imgs[a], imgs[b])
        if mv is None or mv <= 0:
            return False
    return True


def _moves(M: GridMap, step: Fraction) -> Iterator[GridMap]:
    """Certified maps obtained from certified ``M`` by one axis move of one vertex."""
    k = M.k
    _, _, bidx = _incidence(k)
    imgs = list(M.images)
    for v, p in enumerate(imgs):
        if v in bidx:
            sides = sides_of(p)
            if len(sides) != 1:
                continue
            dirs = [(1, 0), (-1, 0)] if min(sides) in (0, 2) else [(0, 1), (0, -1)]
        else:
            dirs = [(1, 0), (-1, 0), (0, 1), (0, -1)]
        for dx, dy in dirs:
            q = (p[0] + dx * step, p[1] + dy * step)
            if not (0 <= q[0] <= 1 and 0 <= q[1] <= 1):
                continue
            imgs[v] = q
            if _move_ok(imgs, k, v):
                yield GridMap(k, tuple(imgs))
            imgs[v] = p


def _random_certified(k: int, rng: random.Random, steps: int = 40) -> GridMap:
    """Random walk of single-vertex moves from the identity."""
    step = Fraction(1, 4 * k)
    _, _, bidx = _incidence(k)
    imgs = list(GridMap.identity(k).images)
    dirs = [(1, 0), (-1, 0), (0, 1), (0, -1)]
    for _ in range(steps):
        v = rng.randrange(len(imgs))
        dx, dy = dirs[rng.randrange(4)]
        p = imgs[v]
        if v in bidx:
            sides = sides_of(p)
            if len(sides) != 1 or (dx != 0) != (min(sides) in (0, 2)):
                continue
        q = (p[0] + dx * step, p[1] + dy * step)
        if not (0 <= q[0] <= 1 and 0 <= q[1] <= 1):
            continue
        imgs[v] = q
        if not _move_ok(imgs, k, v):
            imgs[v] = p
    return GridMap(k, tuple(imgs))


def _local_search(screen: _Screen, phi: GridMap, psi: GridMap, budget: int,
                  min_step: Fraction) -> Tuple[GridMap, GridMap]:
    cur = screen(phi, psi)
    step = Fraction(1, 2 * phi.k)
    while step >= min_step and screen.evals < budget:
        best = None
        for which in (0, 1):
            for G in _moves(phi if which == 0 else psi, step):
                cand = (G, psi) if which == 0 else (phi, G)
                val = screen(*cand)
                key = (val, cand[0].images, cand[1].images)
                if best is None or key < best[0]:
                    best = (key, cand)
                if screen.evals >= budget:
                    break
        if best is not None and best[0][0] < cur:
            cur = best[0][0]
            phi, psi = best[1]
        else:
            step /= 2
    return phi, psi


def _run_start(job) -> List[Tuple[GridMap, GridMap]]:
    A, B, phi, psi, k, budget = job
    screen = _Screen(A, B, k)
    cands = [(phi, psi)]
    if screen(phi, psi) > 0:
        cands.append(_local_search(screen, phi, psi, budget, Fraction(1, 16 * k)))
    return cands


def map_json(M: GridMap) -> List[str]:
    return [f"{format_rat(x)},{format_rat(y)}" for x, y in M.images]


def map_from_json(k: int, images: Sequence[str]) -> GridMap:
    return GridMap(k, tuple(tuple(Fraction(c) for c in s.split(",")) for s in images))


def upper_bound_search(A: GridSurface, B: GridSurface, k: int = 2, restarts: int = 2,
                       budget: int = 400, seed: int = 0, tol=DEFAULT_TOL,
                       starts: Sequence[Tuple[GridMap, GridMap]] = (),
                       workers: int = 1) -> BoundReport:
    """Best certified-pair objective found by local search over vertex images.

    Start pairs: ``starts`` (refined to grid ``k``), the four rotations
    paired with the identity, then ``restarts`` random certified maps.
    Moves shift one vertex image of ``phi`` or ``psi`` along an axis and are
    accepted only if the map stays certified. ``budget`` caps float
    screening evaluations per start. Starts run in ``workers`` processes;
    results are merged in start order, so the outcome does not depend on
    ``workers``.
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    tol = as_rat(tol)
    t0 = time.perf_counter()
    rng = random.Random(seed)
    init: List[Tuple[GridMap, GridMap]] = []
    for phi, psi in starts:
        if k % phi.k == 0 and k % psi.k == 0:
            init.append((phi.refine(k // phi.k), psi.refine(k // psi.k)))
    ident = GridMap.identity(k)
    init += [(rotation_map(k, a), ident) for a in range(4)]
    init += [(_random_certified(k, rng), _random_certified(k, rng)) for _ in range(restarts)]

    jobs = [(A, B, phi, psi, k, budget) for phi, psi in init]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_start, jobs))
    else:
        results = [_run_start(job) for job in jobs]

    best_hi, best_pair = None, None
    seen = set()
    for cands in results:
        for cand in cands:
            key = (cand[0].images, cand[1].images)
            if key in seen or not (is_certified(cand[0]) and is_certified(cand[1])):
                continue
            seen.add(key)
            try:
                enc = objective(ObjectivePair(A, B, *cand), tol)
            except ValueError:
                continue
            if best_hi is None or enc.hi < best_hi:
                best_hi, best_pair = enc.hi, cand
        if best_hi == 0:
            break
    report = BoundReport(Enclosure())
    if best_pair is not None:
        report.add(BoundEntry("upper", best_hi, "CertifiedPair", {
            "phi": best_pair[0].digest(), "psi": best_pair[1].digest(), "k": k,
            "seed": seed, "restarts": restarts, "budget": budget, "tol": tol,
            "phi_images": map_json(best_pair[0]), "psi_images": map_json(best_pair[1]),
        }, time.perf_counter() - t0))
        report.best_pair = best_pair
    return report


# ---------------------------------------------------------------------------
# lower bounds


def hausdorff_images(A: GridSurface, B: GridSurface, tol=DEFAULT_TOL) -> Enclosure:
    """Hausdorff distance between the images of two vector-valued surfaces."""
    if A.space != B.space:
        raise ValueError("surfaces live in different spaces")
    return hausdorff_triangles(A.image_triangles(), B.image_triangles(), A.space, as_rat(tol))


def boundary_lower_bound(A: GridSurface, B: GridSurface, tol=DEFAULT_TOL) -> Enclosure:
    """Closed-curve Fréchet distance of the boundary curves (counter-clockwise).

    Admissible reparametrisations restrict to orientation-preserving
    boundary maps, so the lower end is a lower bound for the surfaces.
    """
    if A.space != B.space:
        raise ValueError("surfaces live in different spaces")
    return closed_curve_frechet(A.boundary_curve(), B.boundary_curve(), as_rat(tol), A.space)


@dataclass(frozen=True)
class NetBound:
    value: Fraction
    certified: bool
    net_size: int
    n: int
    k: int
    delta: Fraction
    argmin: Optional[Tuple[str, str]] = None


def lower_bound_enumerate(A: GridSurface, B: GridSurface, n: int, k: int, delta,
                          cap: int = 4096, tol=DEFAULT_TOL) -> NetBound:
    """Minimum of the objective lower end over all net pairs, minus ``2^-n``.

    ``certified`` is set only when the net is provably ``2^-alpha(n)``-dense
    around every map the schedule admits; otherwise the value is a heuristic
    and must not enter an enclosure.
    """
    delta = as_rat(delta)
    schedule = SearchSchedule(n, modulus_of(A), modulus_of(B))
    maps = list(enumerate_net(k, delta, schedule, cap=cap))
    if len(maps) ** 2 > cap:
        raise NetTooLarge(f"{len(maps)}^2 pairs exceed the cap of {cap}")
    best, arg = None, None
    for phi in maps:
        for psi in maps:
            lo = objective(ObjectivePair(A, B, phi, psi), tol).lo
            if best is None or lo < best:
                best, arg = lo, (phi.digest(), psi.digest())
    if best is None:
        raise ValueError("empty net")
    return NetBound(best - Fraction(1, 2 ** n), net_density_premise(schedule, k, delta),
                    len(maps), n, k, delta, arg)


def trivial_upper(A: GridSurface, B: GridSurface) -> Fraction:
    """``max d(a, b)`` over all vertex values: bounds the objective of every pair."""
    if isinstance(A.space, Table):
        return max(A.space.distances[a][b] for a in set(A.samples) for b in set(B.samples))
    if isinstance(A.space, Euclidean):
        sq = max(sq_dist(a, b) for a in set(A.samples) for b in set(B.samples))
        return sqrt_enclosure(sq, Fraction(1, 2**32))[1]
    return max(max_dist(a, b) for a in set(A.samples) for b in set(B.samples))


# ---------------------------------------------------------------------------
# driver


@dataclass(frozen=True)
class DriverConfig:
    k_levels: Tuple[int, ...] = (1, 2, 4)
    restarts: int = 2
    search_budget: int = 400
    seed: int = 0
    nets: Tuple[Tuple[int, int, Fraction], ...] = ((0, 1, Fraction(1, 2)),)
    net_cap: int = 4096
    workers: int = 1


def frechet_stream(A: GridSurface, B: GridSurface, tol=DEFAULT_TOL,
                   budget: Optional[float] = None,
                   config: DriverConfig = DriverConfig()) -> Iterator[BoundReport]:
    """Stream of report snapshots, one per tightening, ending with the final one.

    ``budget`` is wall-clock seconds (``None`` for unlimited).
    """
    if A.space != B.space:
        raise ValueError("surfaces live in different spaces")
    tol = as_rat(tol)
    if tol <= 0 and budget is None:
        raise ValueError("need tol > 0 or a finite budget")
    start = time.perf_counter()
    report = BoundReport(Enclosure())
    vector = not isinstance(A.space, Table)

    def elapsed():
        return time.perf_counter() - start

    def out_of_time():
        return budget is not None and elapsed() > budget

    def done():
        w = report.enclosure.width
        return w is not None and w <= tol

    push = report.add
    push(BoundEntry("lower", ZERO, "Trivial", {}, elapsed()))
    push(BoundEntry("upper", trivial_upper(A, B), "Trivial", {"rule": "max vertex-value distance"}, elapsed()))
    yield report.snapshot()

    def phases():
        if vector:
            yield "hausdorff"
            yield "boundary"
        for k in config.k_levels:
            yield ("search", k)
        for net in config.nets:
            yield ("net", net)

    for phase in phases():
        if done() or out_of_time():
            break
        entry = None
        if phase == "hausdorff":
            enc = hausdorff_images(A, B, tol / 2)
            entry = BoundEntry("lower", enc.lo, "HausdorffImages", {"tol": tol / 2}, elapsed())
        elif phase == "boundary":
            enc = boundary_lower_bound(A, B, tol / 2)
            entry = BoundEntry("lower", enc.lo, "BoundaryCurves", {"tol": tol / 2}, elapsed())
        elif phase[0] == "search":
            starts = [report.best_pair] if report.best_pair is not None else []
            sub = upper_bound_search(A, B, k=phase[1], restarts=config.restarts,
                                     budget=config.search_budget, seed=config.seed,
                                     tol=tol / 2, starts=starts, workers=config.workers)
            if sub.entries:
                entry = BoundEntry("upper", sub.enclosure.hi, "CertifiedPair",
                                   sub.entries[0].params, elapsed())
                if report.best_pair is None or sub.enclosure.hi < report.enclosure.hi:
                    report.best_pair = sub.best_pair
        else:
            n, k, delta = phase[1]
            try:
                nb = lower_bound_enumerate(A, B, n, k, delta, cap=config.net_cap, tol=tol / 2)
            except (NetTooLarge, ScheduleTooLarge, ValueError):
                continue
            entry = BoundEntry("lower", max(nb.value, ZERO), "NetMinimum", {
                "n": n, "k": k, "delta": delta, "net_size": nb.net_size,
            }, elapsed(), certified=nb.certified)
        if entry is not None and push(entry):
            report.converged = done()
            yield report.snapshot()
    report.converged = done()
    yield report.snapshot()


def frechet_distance(A: GridSurface, B: GridSurface, tol=DEFAULT_TOL,
                     budget: Optional[float] = None,
                     config: DriverConfig = DriverConfig()) -> BoundReport:
    """Final report of :func:`frechet_stream`."""
    last = None
    for last in frechet_stream(A, B, tol, budget, config):
        pass
    return last
