from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from plfrechet.degree import (
    CellRegion,
    DegreeQuery,
    DegreeUndefined,
    PLGridMap,
    PolygonRegion,
    covers,
    degree,
    degree_triangle_sum,
    pieces,
    straight_homotopy,
    straight_homotopy_avoids,
    translate,
    winding_number,
)
from plfrechet.geometry import in_convex
from plfrechet.plmap import GridMap, grid_vertices

F = Fraction
H = F(1, 2)
SQUARE = [(F(0), F(0)), (F(1), F(0)), (F(1), F(1)), (F(0), F(1))]
ID2 = GridMap.identity(2)
SWAP = GridMap.from_function(2, lambda p: (p[1], p[0]))
FOLD = GridMap.from_function(2, lambda p: (1 - abs(2 * p[0] - 1), p[1]))


def _loop(pts):
    return [(pts[i], pts[(i + 1) % len(pts)]) for i in range(len(pts))]


def test_degree_examples():
    D = CellRegion.whole(1)
    assert degree_triangle_sum(DegreeQuery(ID2, D, (H, H))) == 1
    assert degree(DegreeQuery(SWAP, D, (H, H))).value == -1
    assert degree(DegreeQuery(FOLD, D, (H, H))).value == 0


def test_identity_with_witness():
    for region in (CellRegion(4, frozenset({(1, 1), (2, 1)})),
                   PolygonRegion(((F(1, 10), F(1, 10)), (F(9, 10), F(1, 5)), (F(1, 2), F(4, 5))))):
        res = degree(DegreeQuery(ID2, region, (F(1, 2), F(2, 5))))
        assert res.value == 1
        assert in_convex(list(res.witness.image), (F(1, 2), F(2, 5)))
        assert res.witness.preimage == (F(1, 2), F(2, 5))


def test_outside_image_is_zero():
    half = GridMap.from_function(2, lambda p: (p[0] / 2, p[1]))
    assert degree(DegreeQuery(half, CellRegion.whole(1), (F(3, 4), H))).value == 0


def test_undefined_on_boundary_image():
    with pytest.raises(DegreeUndefined):
        degree(DegreeQuery(ID2, CellRegion.whole(1), (0, H)))
    assert not DegreeQuery(ID2, CellRegion.whole(1), (1, 1)).well_posed()


def test_winding_examples():
    assert winding_number(_loop(SQUARE), (H, H)) == 1
    assert winding_number(_loop(SQUARE), (2, H)) == 0
    assert winding_number(_loop(SQUARE) + _loop(SQUARE), (H, H)) == 2
    assert winding_number(_loop(SQUARE[::-1]), (H, H)) == -1
    with pytest.raises(DegreeUndefined):
        winding_number(_loop(SQUARE), (1, H))


def test_edge_targets_perturbed():
    # target on an interior diagonal image still gets the right degree
    for y in ((F(1, 4), F(1, 4)), (H, F(1, 4)), (H, H)):
        assert degree(DegreeQuery(ID2, CellRegion.whole(1), y)).value == 1


def test_region_signed_distance():
    U = CellRegion(2, frozenset({(0, 0)}))
    assert U.signed_distance((F(1, 4), F(1, 4))) == -F(1, 4)
    assert U.signed_distance((F(3, 4), F(1, 4))) == F(1, 4)
    assert U.signed_distance((H, F(1, 4))) == 0
    with pytest.raises(ValueError):
        PolygonRegion(((0, 0), (1, 1), (1, 0), (0, 1)))


def test_components():
    U = CellRegion(3, frozenset({(0, 0), (1, 0), (2, 2)}))
    assert sorted(len(c.cells) for c in U.components()) == [1, 2]


coord = st.fractions(min_value=-1, max_value=2, max_denominator=6)
target = st.fractions(min_value=0, max_value=1, max_denominator=7)


@st.composite
def pl_maps(draw, k=2):
    return PLGridMap(k, tuple((draw(coord), draw(coord)) for _ in range((k + 1) ** 2)))


@st.composite
def cell_regions(draw):
    r = draw(st.sampled_from([1, 2, 3]))
    cells = draw(st.sets(st.tuples(st.integers(0, r - 1), st.integers(0, r - 1)), min_size=1))
    return CellRegion(r, frozenset(cells))


@given(pl_maps(), cell_regions(), target, target)
def test_cross_check_and_translation(f, U, a, b):
    y = (a, b)
    q = DegreeQuery(f, U, y)
    if not q.well_posed():
        with pytest.raises(DegreeUndefined):
            degree(q)
        return
    d = degree(q)  # raises DegreeMismatch on disagreement
    assert d.value == winding_number(q.boundary_image(), y)
    assert degree(DegreeQuery(translate(f, (-a, -b)), U, (0, 0))).value == d.value
    if d.value != 0:
        w = d.witness
        assert in_convex(list(w.image), y) or in_convex(list(w.image)[::-1], y)
        assert covers(f, U, y)


@given(pl_maps(), cell_regions(), target, target)
def test_additivity(f, U, a, b):
    comps = U.components()
    y = (a, b)
    qs = [DegreeQuery(f, c, y) for c in comps]
    if not all(q.well_posed() for q in qs):
        return
    total = sum(degree(q).value for q in qs)
    assert degree(DegreeQuery(f, U, y)).value == total


@given(pl_maps(), pl_maps(), target, target)
def test_homotopy_invariance(f, g, a, b):
    U = CellRegion.whole(1)
    y = (a, b)
    if not straight_homotopy_avoids(f, g, U, y):
        return
    d0 = degree(DegreeQuery(f, U, y)).value
    assert degree(DegreeQuery(g, U, y)).value == d0
    assert degree(DegreeQuery(straight_homotopy(f, g, H), U, y)).value == d0


@given(cell_regions(), target, target)
def test_normalisation(U, a, b):
    y = (a, b)
    if U.signed_distance(y) >= 0:
        return
    assert degree(DegreeQuery(GridMap.identity(U.resolution), U, y)).value == 1
