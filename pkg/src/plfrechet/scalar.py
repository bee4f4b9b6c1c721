"""Exact rational scalars, two-sided enclosures and codomain metric spaces.

Every geometric quantity in the package is a :class:`fractions.Fraction`.
Real numbers that are only approximable (square roots, suprema over
compact sets, infima over reparametrisations) are represented by an
:class:`Enclosure`: a pair of monotone rational bound streams.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Tuple, Union

Rat = Fraction

__all__ = [
    "Rat",
    "as_rat",
    "format_rat",
    "ceil_log2",
    "UnsoundBounds",
    "Enclosure",
    "MaxNorm",
    "Euclidean",
    "Table",
    "MetricSpace",
    "distance",
    "sqrt_enclosure",
]


def as_rat(value) -> Fraction:
    """Convert ints, Fractions and rational/decimal literals to a Fraction.

    Floats are rejected: they would smuggle binary rounding into exact code.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty rational literal")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"invalid rational literal {value!r}") from exc
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def format_rat(q: Fraction) -> str:
    """Render as ``p/q`` (or ``p`` for integers); inverse of :func:`as_rat`."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def ceil_log2(q: Fraction) -> int:
    """Smallest integer ``e`` with ``2**e >= q`` for ``q > 0``."""
    if q <= 0:
        raise ValueError("ceil_log2 needs a positive argument")
    num, den = q.numerator, q.denominator
    # start from the bit-length estimate and correct by at most a couple of steps
    e = num.bit_length() - den.bit_length()
    while _pow2_ge(e, num, den):
        e -= 1
    while not _pow2_ge(e, num, den):
        e += 1
    return e


def _pow2_ge(e: int, num: int, den: int) -> bool:
    # 2**e >= num/den
    if e >= 0:
        return (den << e) >= num
    return den >= (num << -e)


class UnsoundBounds(ArithmeticError):
    """A bound source produced a lower bound above an upper bound (or vice versa)."""


@dataclass(frozen=True)
class Enclosure:
    """Monotone two-sided rational bound history for one real number.

    ``lower`` and ``upper`` are tuples of ``(value, stamp)`` pairs in
    insertion order; ``stamp`` records the work budget that produced the
    entry. An empty side means the bound is still infinite.
    """

    lower: Tuple[Tuple[Fraction, object], ...] = ()
    upper: Tuple[Tuple[Fraction, object], ...] = ()

    def __post_init__(self):
        lo, hi = self.lo, self.hi
        if lo is not None and hi is not None and lo > hi:
            raise UnsoundBounds(f"unsound bounds: lower {lo} > upper {hi}")
        for seq, sign in ((self.lower, 1), (self.upper, -1)):
            for (a, _), (b, _) in zip(seq, seq[1:]):
                if sign * (b - a) < 0:
                    raise UnsoundBounds("enclosure history is not monotone")

    @classmethod
    def exact(cls, value, stamp: object = None) -> "Enclosure":
        v = as_rat(value)
        return cls(((v, stamp),), ((v, stamp),))

    @classmethod
    def between(cls, lo, hi, stamp: object = None) -> "Enclosure":
        return cls(((as_rat(lo), stamp),), ((as_rat(hi), stamp),))

    @property
    def lo(self) -> Optional[Fraction]:
        return self.lower[-1][0] if self.lower else None

    @property
    def hi(self) -> Optional[Fraction]:
        return self.upper[-1][0] if self.upper else None

    @property
    def width(self) -> Optional[Fraction]:
        if self.lower and self.upper:
            return self.hi - self.lo
        return None

    def contains(self, value) -> bool:
        v = as_rat(value)
        return (self.lo is None or self.lo <= v) and (self.hi is None or v <= self.hi)

    def tighten(self, new_lower=None, new_upper=None, stamp: object = None) -> "Enclosure":
        return enclosure_tighten(self, new_lower, new_upper, stamp)

    def __repr__(self) -> str:
        lo = "-inf" if self.lo is None else format_rat(self.lo)
        hi = "+inf" if self.hi is None else format_rat(self.hi)
        return f"Enclosure[{lo}, {hi}]"


def enclosure_tighten(e: Enclosure, new_lower=None, new_upper=None,
                      stamp: object = None) -> Enclosure:
    """Return ``e`` narrowed by the given bounds.

    A bound weaker than the current one is ignored. A bound that crosses the
    opposite side raises :class:`UnsoundBounds`; it is never clamped.
    """
    lower, upper = e.lower, e.upper
    lo = None if new_lower is None else as_rat(new_lower)
    hi = None if new_upper is None else as_rat(new_upper)
    cur_hi = hi if hi is not None and (e.hi is None or hi < e.hi) else e.hi
    cur_lo = lo if lo is not None and (e.lo is None or lo > e.lo) else e.lo
    if lo is not None and cur_hi is not None and lo > cur_hi:
        raise UnsoundBounds(f"unsound bounds: new lower {lo} > upper {cur_hi}")
    if hi is not None and cur_lo is not None and hi < cur_lo:
        raise UnsoundBounds(f"unsound bounds: new upper {hi} < lower {cur_lo}")
    if lo is not None and (e.lo is None or lo > e.lo):
        lower = lower + ((lo, stamp),)
    if hi is not None and (e.hi is None or hi < e.hi):
        upper = upper + ((hi, stamp),)
    if lower is e.lower and upper is e.upper:
        return e
    return Enclosure(lower, upper)


# ---------------------------------------------------------------------------
# metric spaces


@dataclass(frozen=True)
class MaxNorm:
    d: int

    @property
    def kind(self) -> str:
        return "maxnorm"


@dataclass(frozen=True)
class Euclidean:
    """R^d with the Euclidean norm; distances are enclosed by outward-rounded
    integer square roots at denominator ``2**bits``."""

    d: int

    @property
    def kind(self) -> str:
        return "euclid"


@dataclass(frozen=True)
class Table:
    """A finite metric space given by its distance matrix."""

    n: int
    distances: Tuple[Tuple[Fraction, ...], ...] = field(repr=False)

    def __post_init__(self):
        n = self.n
        if len(self.distances) != n or any(len(row) != n for row in self.distances):
            raise ValueError(f"table metric needs an {n}x{n} distance matrix")
        D = self.distances
        for i in range(n):
            if D[i][i] != 0:
                raise ValueError(f"table metric: nonzero diagonal entry at {i}")
            for j in range(i + 1, n):
                if D[i][j] != D[j][i]:
                    raise ValueError(f"table metric: asymmetric entry ({i}, {j})")
                if D[i][j] <= 0:
                    raise ValueError(f"table metric: distinct points {i}, {j} at distance {D[i][j]}")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if D[i][k] > D[i][j] + D[j][k]:
                        raise ValueError(f"table metric: triangle inequality fails for ({i}, {j}, {k})")

    @property
    def d(self) -> int:
        return 0

    @property
    def kind(self) -> str:
        return "table"


MetricSpace = Union[MaxNorm, Euclidean, Table]

Point = Sequence[Fraction]


def bits_for(precision: Fraction) -> int:
    """Smallest ``b >= 0`` with ``2**-b <= precision``."""
    precision = as_rat(precision)
    if precision <= 0:
        raise ValueError("precision must be positive")
    return max(0, ceil_log2(1 / precision))


def sqrt_enclosure(x: Fraction, precision: Fraction) -> Tuple[Fraction, Fraction]:
    """Rational ``(lo, hi)`` with ``lo <= sqrt(x) <= hi`` and ``hi - lo <= precision``.

    Perfect rational squares come back exact.
    """
    x = as_rat(x)
    if x < 0:
        raise ValueError("square root of a negative number")
    rn, rd = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if rn * rn == x.numerator and rd * rd == x.denominator:
        r = Fraction(rn, rd)
        return r, r
    b = bits_for(precision)
    scale = 1 << b
    # floor(sqrt(x) * 2^b) = isqrt(floor(x * 4^b))
    s = math.isqrt((x.numerator << (2 * b)) // x.denominator)
    return Fraction(s, scale), Fraction(s + 1, scale)


def sq_dist(p: Point, q: Point) -> Fraction:
    return sum(((a - b) * (a - b) for a, b in zip(p, q)), Fraction(0))


def max_dist(p: Point, q: Point) -> Fraction:
    return max((abs(a - b) for a, b in zip(p, q)), default=Fraction(0))


def _check_point(space: MetricSpace, p) -> None:
    if isinstance(space, Table):
        if not isinstance(p, int) or not 0 <= p < space.n:
            raise IndexError(f"table point index {p!r} out of range 0..{space.n - 1}")
    elif len(p) != space.d:
        raise ValueError(f"dimension mismatch: expected {space.d}, got {len(p)}")


def distance(space: MetricSpace, p, q, precision=Fraction(1, 2**32)) -> Enclosure:
    """Enclosure of ``d(p, q)`` in ``space`` with width at most ``precision``."""
    _check_point(space, p)
    _check_point(space, q)
    if isinstance(space, Table):
        return Enclosure.exact(space.distances[p][q])
    if isinstance(space, MaxNorm):
        return Enclosure.exact(max_dist(p, q))
    lo, hi = sqrt_enclosure(sq_dist(p, q), as_rat(precision))
    return Enclosure.between(lo, hi)
