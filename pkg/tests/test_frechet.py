import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from plfrechet.frechet import (
    BoundEntry,
    BoundReport,
    DriverConfig,
    ObjectivePair,
    _random_certified,
    boundary_lower_bound,
    frechet_distance,
    frechet_stream,
    hausdorff_images,
    lower_bound_enumerate,
    map_from_json,
    objective,
    objective_sampled,
    trivial_upper,
    upper_bound_search,
)
from plfrechet.autocert import enumerate_net, is_certified
from plfrechet.plmap import GridMap, GridSurface, grid_vertices, modulus_of, rotation_map, sup_distance
from plfrechet.scalar import Enclosure, Euclidean, MaxNorm, Table, UnsoundBounds

from conftest import constant, plane, random_surface, surface_from
from oracles import (
    brute_force_net,
    brute_force_objective,
    dense_hausdorff,
    dense_objective,
    maxdist,
    sample_surface,
)

F = Fraction
TOL = F(1, 100)
I2 = GridMap.identity(2)
FAST = DriverConfig(k_levels=(1, 2), restarts=1, search_budget=120, nets=())


def test_objective_examples():
    A = random_surface(random.Random(1))
    e = objective(ObjectivePair(A, A, I2, I2))
    assert e.lo == e.hi == 0
    p, q = (F(1), F(2), F(0)), (F(0), F(1, 2), F(1, 3))
    R = rotation_map(2)
    assert objective(ObjectivePair(constant(p), constant(q), R, I2)).lo == F(3, 2)
    for h in (F(1, 4), F(1, 2)):
        e = objective(ObjectivePair(plane(0), plane(h), I2, I2))
        assert e.lo == e.hi == h


def test_objective_euclidean_width():
    A = surface_from(lambda x, y: (x, y), 1, Euclidean(2))
    B = surface_from(lambda x, y: (x + F(3, 10), y + F(4, 10)), 1, Euclidean(2))
    e = objective(ObjectivePair(A, B, GridMap.identity(1), GridMap.identity(1)), F(1, 1000))
    assert e.contains(F(1, 2)) and e.width <= F(1, 1000)


def test_objective_table():
    T = Table(3, ((0, 1, 2), (1, 0, 1), (2, 1, 0)))
    A = GridSurface(1, T, (0, 0, 1, 2))
    B = GridSurface(1, T, (2, 1, 1, 0))
    assert objective(ObjectivePair(A, B, GridMap.identity(1), GridMap.identity(1))).lo == 2
    with pytest.raises(ValueError):
        objective(ObjectivePair(A, B, GridMap.identity(2), GridMap.identity(1)))


def test_objective_rejects_mixed_spaces():
    with pytest.raises(ValueError):
        ObjectivePair(plane(0), constant((0, 0)), I2, I2)


@given(st.randoms(use_true_random=False))
def test_objective_matches_oracles(r):
    A, B = random_surface(r, m=r.choice([1, 2])), random_surface(r, m=r.choice([1, 2]))
    phi, psi = _random_certified(r.choice([1, 2]), r), _random_certified(r.choice([1, 2]), r)
    pair = ObjectivePair(A, B, phi, psi)
    e = objective(pair)
    assert e.lo == e.hi == brute_force_objective(A, B, phi, psi)
    assert dense_objective(A, B, phi, psi, 8) <= e.lo
    s = objective_sampled(pair, F(1, 8), max_mesh=32)
    assert s.lo <= e.lo <= s.hi


def test_search_identical():
    A = random_surface(random.Random(2))
    rep = upper_bound_search(A, A, k=2, restarts=0)
    assert rep.enclosure.hi == 0
    assert rep.entries[0].provenance == "CertifiedPair"


def test_search_parallel_planes():
    for h in (F(1, 4), F(1, 2)):
        rep = upper_bound_search(plane(0), plane(h), k=2, restarts=1, budget=100)
        assert rep.enclosure.hi == h


def _separable(m=2):
    g = lambda t: F(1, 2) * t * t * (3 - 2 * t)
    return surface_from(lambda x, y: (x, y, g(x) + 2 * g(y)), m)


def _rotated(A, quarter=1):
    R = rotation_map(A.m, quarter)
    return GridSurface(A.m, A.space, tuple(A.samples[grid_vertices(A.m).index(p)] for p in R.images))


def test_rotated_copy():
    A = _separable()
    B = _rotated(A)
    rep = upper_bound_search(A, B, k=2, restarts=1, budget=100)
    assert rep.enclosure.hi <= TOL
    assert boundary_lower_bound(A, B, TOL).lo <= TOL


def test_search_deterministic_and_worker_independent():
    r = random.Random(3)
    A, B = random_surface(r), random_surface(r)
    a = upper_bound_search(A, B, k=2, restarts=2, budget=80, seed=5)
    b = upper_bound_search(A, B, k=2, restarts=2, budget=80, seed=5)
    c = upper_bound_search(A, B, k=2, restarts=2, budget=80, seed=5, workers=2)
    assert a.enclosure.hi == b.enclosure.hi == c.enclosure.hi
    assert a.entries[0].params == c.entries[0].params


def test_search_provenance_replays():
    r = random.Random(4)
    A, B = random_surface(r), random_surface(r)
    rep = upper_bound_search(A, B, k=2, restarts=1, budget=80)
    p = rep.entries[0].params
    phi, psi = map_from_json(p["k"], p["phi_images"]), map_from_json(p["k"], p["psi_images"])
    assert phi.digest() == p["phi"] and is_certified(phi) and is_certified(psi)
    assert objective(ObjectivePair(A, B, phi, psi)).hi == rep.enclosure.hi


def test_search_budget_must_be_positive():
    with pytest.raises(ValueError):
        upper_bound_search(plane(0), plane(1), budget=0)


def test_hausdorff_examples():
    A = random_surface(random.Random(6))
    assert hausdorff_images(A, A, TOL).contains(0)
    e = hausdorff_images(plane(0), plane(F(1, 4)), TOL)
    assert e.contains(F(1, 4)) and e.width <= TOL


def test_hausdorff_scaled_copy_vs_dense():
    A = surface_from(lambda x, y: (x, y, F(0)), 1)
    B = surface_from(lambda x, y: (2 * x, 2 * y, F(0)), 1)
    e = hausdorff_images(A, B, TOL)
    assert e.contains(1) and e.width <= TOL
    N = 8
    d = dense_hausdorff(sample_surface(A, N), sample_surface(B, N))
    # dense samples are within 1/N (A) and 2/N (B) of the surfaces
    assert abs(d - 1) <= F(2, N)


def test_boundary_examples():
    A = random_surface(random.Random(7))
    assert boundary_lower_bound(A, A, TOL).lo == 0
    for h in (F(1, 4), F(1, 2)):
        assert boundary_lower_bound(plane(0), plane(h), TOL).lo >= h - TOL


def test_lower_bound_constants():
    p, q = (F(0), F(0), F(0)), (F(1, 3), F(2), F(1))
    nb = lower_bound_enumerate(constant(p), constant(q), 0, 1, F(1, 2))
    assert nb.value == 2 - 1
    assert nb.net_size == 4
    assert not nb.certified
    A = random_surface(random.Random(8))
    assert lower_bound_enumerate(A, A, 1, 1, 1).value <= 0


@given(st.randoms(use_true_random=False))
def test_lower_bound_matches_exhaustive(r):
    A, B = random_surface(r, m=2), random_surface(r, m=2)
    nb = lower_bound_enumerate(A, B, 0, 1, F(1, 2))
    net = sorted(brute_force_net(1, F(1, 2)))
    best = min(brute_force_objective(A, B, GridMap(1, a), GridMap(1, b)) for a in net for b in net)
    assert nb.value == best - 1


def test_net_cap():
    from plfrechet.autocert import NetTooLarge
    with pytest.raises(NetTooLarge):
        lower_bound_enumerate(plane(0), plane(1), 0, 1, F(1, 2), cap=8)


def test_report_rejects_crossing_bounds():
    rep = BoundReport(Enclosure())
    rep.add(BoundEntry("upper", F(1), "Trivial"))
    with pytest.raises(UnsoundBounds):
        rep.add(BoundEntry("lower", F(2), "HausdorffImages"))
    assert not rep.add(BoundEntry("lower", F(1, 2), "NetMinimum", certified=False))
    assert rep.excluded and rep.enclosure.lo is None


def test_driver_known_values():
    A = random_surface(random.Random(9))
    rep = frechet_distance(A, A, TOL, config=FAST)
    assert rep.converged and rep.enclosure.lo == 0 and rep.enclosure.hi <= TOL
    for h in (F(1, 4), F(1, 2)):
        rep = frechet_distance(plane(0), plane(h), TOL, config=FAST)
        assert rep.converged
        assert h - TOL <= rep.enclosure.lo <= h <= rep.enclosure.hi <= h + TOL
    p, q = (F(0), F(0), F(0)), (F(1, 3), F(1, 2), F(1))
    rep = frechet_distance(constant(p), constant(q), TOL, config=FAST)
    assert rep.enclosure.lo >= 1 - TOL and rep.enclosure.hi == 1


def test_stream_sound_at_every_prefix():
    h = F(1, 4)
    snaps = list(frechet_stream(plane(0), plane(h), TOL, config=FAST))
    assert len(snaps) >= 2
    for s in snaps:
        assert s.enclosure.contains(h)
    widths = [s.enclosure.width for s in snaps]
    assert widths == sorted(widths, reverse=True)


def test_driver_budget_stops_early():
    r = random.Random(10)
    A, B = random_surface(r), random_surface(r)
    rep = frechet_distance(A, B, F(1, 10**9), budget=0.0, config=FAST)
    assert not rep.converged
    assert rep.enclosure.lo == 0 and rep.enclosure.hi == trivial_upper(A, B)


@settings(max_examples=10)
@given(st.randoms(use_true_random=False))
def test_driver_ordering_and_symmetry(r):
    A, B = random_surface(r, m=2), random_surface(r, m=2)
    ab = frechet_distance(A, B, TOL, config=FAST)
    ba = frechet_distance(B, A, TOL, config=FAST)
    for rep in (ab, ba):
        lows = [e.value for e in rep.entries if e.side == "lower"]
        ups = [e.value for e in rep.entries if e.side == "upper"]
        assert max(lows) <= min(ups)
        assert hausdorff_images(A, B, TOL).lo <= rep.enclosure.hi
    assert ab.enclosure.lo <= ba.enclosure.hi + 2 * TOL
    assert ba.enclosure.lo <= ab.enclosure.hi + 2 * TOL


@settings(max_examples=15)
@given(st.randoms(use_true_random=False), st.sampled_from([0, 1, 2]))
def test_lemma_stability(r, n):
    A, B = random_surface(r, m=2, den=2), random_surface(r, m=2, den=2)
    alpha = modulus_of(A).rule(n + 1) + modulus_of(B).rule(n + 1)
    phi = _random_certified(2, r)
    eps = F(1, 2 ** alpha)
    imgs = list(phi.images)
    v = 4  # the interior vertex
    cand = (imgs[v][0] + eps * r.choice([-1, 0, 1]), imgs[v][1] + eps * r.choice([-1, 0, 1]))
    imgs[v] = cand
    phi2 = GridMap(2, tuple(imgs))
    if not is_certified(phi2):
        return
    assert sup_distance(phi, phi2) <= eps
    e1 = objective(ObjectivePair(A, B, I2, phi))
    e2 = objective(ObjectivePair(A, B, I2, phi2))
    assert abs(e1.lo - e2.lo) <= F(1, 2 ** n) + e1.width + e2.width
