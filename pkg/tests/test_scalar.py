from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from plfrechet.scalar import (
    Enclosure,
    Euclidean,
    MaxNorm,
    Table,
    UnsoundBounds,
    as_rat,
    ceil_log2,
    distance,
    enclosure_tighten,
    format_rat,
    sqrt_enclosure,
)

F = Fraction
rats = st.fractions(min_value=-8, max_value=8, max_denominator=64)
pos_rats = st.fractions(min_value=F(1, 1000), max_value=1000, max_denominator=1000)


def test_maxnorm_distance_exact():
    e = distance(MaxNorm(2), (0, 0), (3, 4))
    assert e.lo == e.hi == 4


def test_zero_distance_any_space():
    t = Table(2, ((0, 1), (1, 0)))
    for sp, p in ((MaxNorm(2), (1, 2)), (Euclidean(2), (1, 2)), (t, 1)):
        e = distance(sp, p, p)
        assert e.lo == e.hi == 0


def test_euclid_345():
    e = distance(Euclidean(2), (0, 0), (3, 4), F(1, 100))
    assert e.contains(5) and e.width <= F(1, 100)


def test_distance_errors():
    with pytest.raises(ValueError):
        distance(MaxNorm(2), (0, 0, 0), (1, 1))
    with pytest.raises(IndexError):
        distance(Table(2, ((0, 1), (1, 0))), 0, 5)


def test_table_validation():
    with pytest.raises(ValueError):
        Table(2, ((0, 1), (2, 0)))  # asymmetric
    with pytest.raises(ValueError):
        Table(3, ((0, 1, 5), (1, 0, 1), (5, 1, 0)))  # triangle inequality
    with pytest.raises(ValueError):
        Table(2, ((1, 1), (1, 0)))


def test_tighten_examples():
    e = Enclosure.between(0, 10)
    e = enclosure_tighten(e, new_upper=7)
    assert (e.lo, e.hi) == (0, 7)
    assert enclosure_tighten(e, new_upper=9) is e
    with pytest.raises(UnsoundBounds, match="unsound bounds"):
        enclosure_tighten(e, new_lower=8)


def test_floats_rejected():
    with pytest.raises(TypeError):
        as_rat(0.5)
    assert as_rat("0.1") == F(1, 10)
    assert as_rat("-3/6") == F(-1, 2)


@given(rats)
def test_format_roundtrip(q):
    assert as_rat(format_rat(q)) == q


@given(pos_rats)
def test_ceil_log2(q):
    e = ceil_log2(q)
    assert F(2) ** e >= q > F(2) ** (e - 1)


@given(st.fractions(min_value=0, max_value=10**6, max_denominator=10**4),
       st.integers(min_value=2, max_value=80))
def test_sqrt_enclosure(x, bits):
    prec = F(1, 2**bits)
    lo, hi = sqrt_enclosure(x, prec)
    assert lo * lo <= x <= hi * hi
    assert hi - lo <= prec


@given(st.lists(st.tuples(rats, rats), min_size=3, max_size=3), st.booleans())
def test_metric_axioms(pts, euclid):
    sp = Euclidean(2) if euclid else MaxNorm(2)
    prec = F(1, 2**20)
    p, q, r = pts
    dpq, dqp = distance(sp, p, q, prec), distance(sp, q, p, prec)
    assert dpq.lo <= dqp.hi and dqp.lo <= dpq.hi
    if not euclid:
        assert dpq.lo == dpq.hi
        assert (dpq.lo == 0) == (p == q)
    dpr, drq = distance(sp, p, r, prec), distance(sp, r, q, prec)
    assert dpq.lo <= dpr.hi + drq.hi


@given(st.lists(st.tuples(st.booleans(), rats), max_size=30))
def test_enclosure_monotone(ops):
    e = Enclosure.between(-100, 100)
    for is_lower, v in ops:
        try:
            e2 = e.tighten(new_lower=v) if is_lower else e.tighten(new_upper=v)
        except UnsoundBounds:
            if is_lower:
                assert v > e.hi
            else:
                assert v < e.lo
            continue
        assert e2.lo >= e.lo and e2.hi <= e.hi
        assert e2.lo <= e2.hi
        e = e2
    los = [v for v, _ in e.lower]
    his = [v for v, _ in e.upper]
    assert los == sorted(los) and his == sorted(his, reverse=True)
    assert max(los) <= min(his)
