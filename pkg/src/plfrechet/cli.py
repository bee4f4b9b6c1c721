"""Command-line entry points: ``bound``, ``degree``, ``autocert``, ``boundary-lb``.

Exit codes: 0 success (``bound``: converged), 1 parse or validation error,
2 budget exhausted before convergence, 3 degree undefined.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import List, Optional, Sequence

from .autocert import (
    NoViolationAtResolution,
    OrientationCert,
    certify_homeomorphism,
    falsify_pseudoautomorphism,
)
from .degree import CellRegion, DegreeQuery, DegreeUndefined, PolygonRegion, degree
from .frechet import DriverConfig, boundary_lower_bound, frechet_stream, trivial_upper
from .io import ParseError, read_map, read_surface
from .scalar import as_rat, format_rat

EXIT_OK, EXIT_INPUT, EXIT_BUDGET, EXIT_UNDEFINED = 0, 1, 2, 3


class UsageError(ValueError):
    pass


def _rat(text: str) -> Fraction:
    try:
        return as_rat(text)
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _point(text: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"expected 'x,y', got {text!r}")
    return (as_rat(parts[0]), as_rat(parts[1]))


def _net(text: str):
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected 'n,k,invdelta', got {text!r}")
    try:
        n, k, inv = (int(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"net parameters must be integers: {text!r}") from None
    if n < 0 or k < 1 or inv < 1:
        raise argparse.ArgumentTypeError(f"need n >= 0, k >= 1, invdelta >= 1: {text!r}")
    return (n, k, Fraction(1, inv))


def worker_count() -> int:
    raw = os.environ.get("FRECHET_THREADS")
    if raw is None or raw == "":
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"FRECHET_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise UsageError(f"FRECHET_THREADS must be a positive integer, got {raw!r}")
    return n


def parse_region(text: str, k: int):
    kind, _, body = text.partition(":")
    if kind == "whole":
        return CellRegion.whole(1)
    if kind == "cells":
        res = k
        if body.count(":") == 1:
            r, body = body.split(":")
            res = int(r)
        cells = set()
        for item in filter(None, body.split(";")):
            i, j = (int(v) for v in item.split(","))
            cells.add((i, j))
        if not cells:
            raise UsageError("cell region is empty")
        return CellRegion(res, frozenset(cells))
    if kind == "poly":
        pts = [_point(item) for item in filter(None, body.split(";"))]
        return PolygonRegion(tuple(pts))
    raise UsageError(f"region must be 'cells:i,j;...' or 'poly:x,y;...', got {text!r}")


def _emit(obj, fmt: str, text_lines: Sequence[str]):
    if fmt == "json":
        sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write("\n".join(text_lines) + "\n")


def _history(report) -> List[dict]:
    out = []
    for e in report.entries:
        out.append({
            "bound": format_rat(e.value),
            "side": e.side,
            "provenance": e.provenance,
            "params": e.to_json()["params"],
            "elapsed_ms": round(e.elapsed * 1000, 3),
        })
    return out


def result_json(report, params: dict) -> dict:
    e = report.enclosure
    return {
        "lower": format_rat(e.lo),
        "upper": format_rat(e.hi),
        "converged": report.converged,
        "history": _history(report),
        "excluded": [dict(x.to_json(), elapsed_ms=round(x.elapsed * 1000, 3)) for x in report.excluded],
        "params": params,
    }


def cmd_bound(args) -> int:
    A, B = read_surface(args.A), read_surface(args.B)
    if A.space != B.space:
        raise UsageError("surfaces must share the same metric space")
    levels = []
    k = 1
    while k <= args.k:
        levels.append(k)
        k *= 2
    nets = tuple(args.net) if args.net else ()
    cfg = DriverConfig(k_levels=tuple(levels), restarts=args.restarts, seed=args.seed,
                       search_budget=args.search_budget, nets=nets, workers=worker_count())
    report = None
    for report in frechet_stream(A, B, args.tol, args.budget, cfg):
        if args.stream:
            e = report.enclosure
            sys.stderr.write(f"[{format_rat(e.lo)}, {format_rat(e.hi)}]\n")
    params = {
        "A": args.A, "B": args.B, "tol": format_rat(args.tol),
        "budget": args.budget, "k": args.k, "restarts": args.restarts, "seed": args.seed,
        "search_budget": args.search_budget,
        "net": [f"{n},{k},{int(1 / d)}" for n, k, d in nets],
    }
    res = result_json(report, params)
    lines = [f"lower {res['lower']}", f"upper {res['upper']}",
             f"converged {'yes' if report.converged else 'no'}"]
    lines += [f"  {h['side']:5s} {h['bound']:>14s}  {h['provenance']}" for h in res["history"]]
    _emit(res, args.emit, lines)
    return EXIT_OK if report.converged else EXIT_BUDGET


def cmd_degree(args) -> int:
    M = read_map(args.map)
    region = parse_region(args.region, M.k)
    y = _point(args.target)
    try:
        res = degree(DegreeQuery(M, region, y))
    except DegreeUndefined:
        sys.stderr.write("degree undefined: target on boundary image\n")
        return EXIT_UNDEFINED
    out = {"degree": res.value, "target": [format_rat(c) for c in y]}
    lines = [str(res.value)]
    if res.witness is not None:
        w = res.witness
        out["witness"] = {
            "piece": list(w.piece),
            "triangle": [[format_rat(c) for c in p] for p in w.triangle],
            "image": [[format_rat(c) for c in p] for p in w.image],
            "preimage": [format_rat(c) for c in w.preimage],
        }
        lines.append("witness piece {} preimage ({}, {})".format(
            w.piece, format_rat(w.preimage[0]), format_rat(w.preimage[1])))
    _emit(out, args.emit, lines)
    return EXIT_OK


def cmd_autocert(args) -> int:
    M = read_map(args.map)
    cert = certify_homeomorphism(M)
    if isinstance(cert, OrientationCert):
        out = {"result": "certificate", "certificate": cert.summary()}
    else:
        v = falsify_pseudoautomorphism(M, args.resolution)
        if isinstance(v, NoViolationAtResolution):
            out = {"result": "no-violation", **v.to_json(), "certification_failures": cert}
        else:
            out = {"result": "violation", "violation": v.to_json(), "certification_failures": cert}
    sys.stdout.write(json.dumps(out, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_boundary_lb(args) -> int:
    A, B = read_surface(args.A), read_surface(args.B)
    if A.space != B.space:
        raise UsageError("surfaces must share the same metric space")
    enc = boundary_lower_bound(A, B, args.tol)
    upper = trivial_upper(A, B)
    res = {
        "lower": format_rat(enc.lo),
        "upper": format_rat(upper),
        "converged": False,
        "history": [
            {"bound": "0", "side": "lower", "provenance": "Trivial", "params": {}, "elapsed_ms": 0.0},
            {"bound": format_rat(upper), "side": "upper", "provenance": "Trivial",
             "params": {"rule": "max vertex-value distance"}, "elapsed_ms": 0.0},
            {"bound": format_rat(enc.lo), "side": "lower", "provenance": "BoundaryCurves",
             "params": {"tol": format_rat(args.tol)}, "elapsed_ms": 0.0},
        ],
        "boundary_curve_distance": {"lower": format_rat(enc.lo), "upper": format_rat(enc.hi)},
        "params": {"A": args.A, "B": args.B, "tol": format_rat(args.tol)},
    }
    if enc.lo == 0:
        res["history"].pop()
    _emit(res, args.emit, [f"lower {res['lower']}",
                           f"boundary curve distance in [{format_rat(enc.lo)}, {format_rat(enc.hi)}]"])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="plfrechet", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bound", help="enclose the Fréchet distance of two surfaces")
    b.add_argument("A")
    b.add_argument("B")
    b.add_argument("--tol", type=_rat, default=Fraction(1, 100))
    b.add_argument("--budget", type=float, default=None, help="wall-clock seconds")
    b.add_argument("--k", type=int, default=4, help="finest map grid for the upper-bound search")
    b.add_argument("--restarts", type=int, default=2)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--search-budget", type=int, default=400, help="screening evaluations per start")
    b.add_argument("--net", type=_net, action="append", help="n,k,invdelta (repeatable)")
    b.add_argument("--emit", choices=("json", "text"), default="json")
    b.add_argument("--stream", action="store_true", help="print each tightening to stderr")
    b.set_defaults(func=cmd_bound)

    d = sub.add_parser("degree", help="Brouwer degree of a grid map")
    d.add_argument("map")
    d.add_argument("--region", default="whole", help="whole, cells:[res:]i,j;... or poly:x,y;...")
    d.add_argument("--target", required=True)
    d.add_argument("--emit", choices=("json", "text"), default="text")
    d.set_defaults(func=cmd_degree)

    a = sub.add_parser("autocert", help="certify or falsify a reparametrisation")
    a.add_argument("map")
    a.add_argument("--resolution", type=int, default=4)
    a.set_defaults(func=cmd_autocert)

    lb = sub.add_parser("boundary-lb", help="boundary-curve lower bound")
    lb.add_argument("A")
    lb.add_argument("B")
    lb.add_argument("--tol", type=_rat, default=Fraction(1, 100))
    lb.add_argument("--emit", choices=("json", "text"), default="json")
    lb.set_defaults(func=cmd_boundary_lb)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "resolution", 1) < 1:
        parser.error("--resolution must be at least 1")
    try:
        return args.func(args)
    except (ParseError, UsageError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
