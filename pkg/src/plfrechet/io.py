"""Text formats for surfaces (``FSURF 1``) and maps (``FMAP 1``).

Scalars are ``p/q`` rationals or decimal literals, both read exactly.
Blank lines and ``#`` comments are ignored. Errors carry the line number.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Tuple

from .plmap import GridMap, GridSurface
from .scalar import Euclidean, MaxNorm, Table, format_rat


class ParseError(ValueError):
    def __init__(self, source: str, line: int, message: str):
        super().__init__(f"{source}:{line}: {message}")
        self.source = source
        self.line = line


def _lines(text: str) -> List[Tuple[int, List[str]]]:
    out = []
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].split()
        if body:
            out.append((no, body))
    return out


def _scalar(tok: str, source: str, line: int) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise ParseError(source, line, f"not a rational or decimal literal: {tok!r}") from None


class _Cursor:
    def __init__(self, text: str, source: str):
        self.items = _lines(text)
        self.pos = 0
        self.source = source

    def next(self, what: str) -> Tuple[int, List[str]]:
        if self.pos >= len(self.items):
            last = self.items[-1][0] if self.items else 0
            raise ParseError(self.source, last + 1, f"unexpected end of file, expected {what}")
        item = self.items[self.pos]
        self.pos += 1
        return item

    def keyword(self, word: str, nargs: int) -> Tuple[int, List[str]]:
        no, toks = self.next(f"'{word}' line")
        if toks[0] != word or len(toks) != nargs + 1:
            raise ParseError(self.source, no, f"expected '{word}' with {nargs} argument(s), got {' '.join(toks)!r}")
        return no, toks[1:]

    def integer(self, tok: str, no: int, lo: int = 1) -> int:
        try:
            v = int(tok)
        except ValueError:
            raise ParseError(self.source, no, f"expected an integer, got {tok!r}") from None
        if v < lo:
            raise ParseError(self.source, no, f"expected an integer >= {lo}, got {v}")
        return v

    def finish(self):
        if self.pos < len(self.items):
            no, toks = self.items[self.pos]
            raise ParseError(self.source, no, f"trailing data: {' '.join(toks)!r}")


def parse_surface(text: str, source: str = "<surface>") -> GridSurface:
    cur = _Cursor(text, source)
    no, toks = cur.next("header")
    if toks != ["FSURF", "1"]:
        raise ParseError(source, no, "expected header 'FSURF 1'")
    no, toks = cur.next("metric line")
    kind = toks[0]
    if kind in ("maxnorm", "euclid") and len(toks) == 2:
        d = cur.integer(toks[1], no)
        space = MaxNorm(d) if kind == "maxnorm" else Euclidean(d)
    elif kind == "table" and len(toks) == 2:
        n = cur.integer(toks[1], no)
        rows = []
        for _ in range(n):
            rno, rt = cur.next("table row")
            if len(rt) != n:
                raise ParseError(source, rno, f"table row needs {n} entries, got {len(rt)}")
            rows.append(tuple(_scalar(t, source, rno) for t in rt))
        try:
            space = Table(n, tuple(rows))
        except ValueError as exc:
            raise ParseError(source, no, f"invalid distance table: {exc}") from None
    else:
        raise ParseError(source, no, f"expected 'maxnorm d', 'euclid d' or 'table N', got {' '.join(toks)!r}")
    no, (mtok,) = cur.keyword("grid", 1)
    m = cur.integer(mtok, no)
    samples = []
    for _ in range((m + 1) ** 2):
        dno, dt = cur.next("data line")
        if isinstance(space, Table):
            if len(dt) != 1:
                raise ParseError(source, dno, "table surfaces need one point index per line")
            idx = cur.integer(dt[0], dno, lo=0)
            if idx >= space.n:
                raise ParseError(source, dno, f"point index {idx} out of range for table of size {space.n}")
            samples.append(idx)
        else:
            if len(dt) != space.d:
                raise ParseError(source, dno, f"expected {space.d} scalars, got {len(dt)}")
            samples.append(tuple(_scalar(t, source, dno) for t in dt))
    cur.finish()
    return GridSurface(m, space, tuple(samples))


def format_surface(S: GridSurface) -> str:
    sp = S.space
    lines = ["FSURF 1"]
    if isinstance(sp, Table):
        lines.append(f"table {sp.n}")
        lines += [" ".join(format_rat(v) for v in row) for row in sp.distances]
    else:
        lines.append(f"{'euclid' if isinstance(sp, Euclidean) else 'maxnorm'} {sp.d}")
    lines.append(f"grid {S.m}")
    for s in S.samples:
        lines.append(str(s) if isinstance(sp, Table) else " ".join(format_rat(c) for c in s))
    return "\n".join(lines) + "\n"


def parse_map(text: str, source: str = "<map>") -> GridMap:
    cur = _Cursor(text, source)
    no, toks = cur.next("header")
    if toks != ["FMAP", "1"]:
        raise ParseError(source, no, "expected header 'FMAP 1'")
    no, (ktok,) = cur.keyword("grid", 1)
    k = cur.integer(ktok, no)
    images = []
    for _ in range((k + 1) ** 2):
        dno, dt = cur.next("vertex image line")
        if len(dt) != 2:
            raise ParseError(source, dno, f"expected 2 scalars, got {len(dt)}")
        p = tuple(_scalar(t, source, dno) for t in dt)
        if not all(0 <= c <= 1 for c in p):
            raise ParseError(source, dno, f"vertex image {dt[0]} {dt[1]} outside [0,1]^2")
        images.append(p)
    cur.finish()
    return GridMap(k, tuple(images))


def format_map(M: GridMap) -> str:
    lines = ["FMAP 1", f"grid {M.k}"]
    lines += [f"{format_rat(x)} {format_rat(y)}" for x, y in M.images]
    return "\n".join(lines) + "\n"


def read_surface(path: str) -> GridSurface:
    with open(path, encoding="utf-8") as fh:
        return parse_surface(fh.read(), path)


def read_map(path: str) -> GridMap:
    with open(path, encoding="utf-8") as fh:
        return parse_map(fh.read(), path)
