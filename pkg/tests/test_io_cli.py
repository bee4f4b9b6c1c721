import json
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from plfrechet.cli import main, worker_count
from plfrechet.frechet import (
    ObjectivePair,
    boundary_lower_bound,
    hausdorff_images,
    lower_bound_enumerate,
    map_from_json,
    objective,
    trivial_upper,
)
from plfrechet.io import ParseError, format_map, format_surface, parse_map, parse_surface, read_surface
from plfrechet.plmap import GridMap, GridSurface, rotation_map
from plfrechet.scalar import Euclidean, MaxNorm, Table

from conftest import constant, plane, random_surface

F = Fraction
rat = st.fractions(min_value=-4, max_value=4, max_denominator=32)
unit = st.fractions(min_value=0, max_value=1, max_denominator=32)


@st.composite
def surfaces(draw):
    m = draw(st.integers(1, 3))
    kind = draw(st.sampled_from(["max", "euc", "table"]))
    n = (m + 1) ** 2
    if kind == "table":
        sz = draw(st.integers(1, 3))
        dist = ((0, 1, 2), (1, 0, 1), (2, 1, 0))
        T = Table(sz, tuple(row[:sz] for row in dist[:sz]))
        return GridSurface(m, T, tuple(draw(st.integers(0, sz - 1)) for _ in range(n)))
    d = draw(st.integers(1, 3))
    space = MaxNorm(d) if kind == "max" else Euclidean(d)
    return GridSurface(m, space, tuple(tuple(draw(rat) for _ in range(d)) for _ in range(n)))


@given(surfaces())
def test_surface_roundtrip(S):
    assert parse_surface(format_surface(S)) == S


@given(st.integers(1, 3), st.data())
def test_map_roundtrip(k, data):
    M = GridMap(k, tuple((data.draw(unit), data.draw(unit)) for _ in range((k + 1) ** 2)))
    assert parse_map(format_map(M)) == M


def test_decimals_exact_and_comments():
    text = "FSURF 1\n# comment\nmaxnorm 1\ngrid 1\n0.1\n1/3  # trailing\n\n2.50\n-0.125\n"
    S = parse_surface(text)
    assert S.samples == ((F(1, 10),), (F(1, 3),), (F(5, 2),), (F(-1, 8),))


@pytest.mark.parametrize("text,line", [
    ("FSURF 2\n", 1),
    ("FSURF 1\nmaxnorm 2\ngrid 1\n0 0\n0 1\n1 0\n", 7),
    ("FSURF 1\nmaxnorm 2\ngrid 1\n0 0\n0 x\n1 0\n1 1\n", 5),
    ("FSURF 1\nmaxnorm 2\ngrid 1\n0 0\n0 1\n1 0\n1 1\n5 5\n", 8),
    ("FSURF 1\ntable 2\n0 1\n2 0\ngrid 1\n0\n0\n1\n1\n", 2),
    ("FSURF 1\ntable 2\n0 1\n1 0\ngrid 1\n0\n0\n7\n1\n", 8),
])
def test_surface_parse_errors(text, line):
    with pytest.raises(ParseError) as info:
        parse_surface(text, "s.fsurf")
    assert info.value.line == line
    assert str(info.value).startswith(f"s.fsurf:{line}:")


def test_map_parse_errors():
    with pytest.raises(ParseError, match="outside"):
        parse_map("FMAP 1\ngrid 1\n0 0\n1 0\n0 1\n2 1\n")
    with pytest.raises(ParseError, match="grid"):
        parse_map("FMAP 1\nk 1\n")


def _write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def _run(argv, capsys):
    code = main(argv)
    cap = capsys.readouterr()
    return code, cap.out, cap.err


FAST = ["--k", "2", "--restarts", "1", "--search-budget", "100"]


def test_bound_identical(tmp_path, capsys):
    A = _write(tmp_path, "a.fsurf", format_surface(random_surface(__import__("random").Random(1))))
    code, out, _ = _run(["bound", A, A, "--tol", "1/100"] + FAST, capsys)
    res = json.loads(out)
    assert code == 0 and res["converged"]
    assert res["lower"] == "0" and F(res["upper"]) <= F(1, 100)
    assert set(res) >= {"lower", "upper", "converged", "history", "params"}
    assert res["params"]["seed"] == 0


def test_bound_parallel_planes(tmp_path, capsys):
    A = _write(tmp_path, "a.fsurf", format_surface(plane(0)))
    B = _write(tmp_path, "b.fsurf", format_surface(plane(F(1, 2))))
    code, out, _ = _run(["bound", A, B, "--tol", "1/100"] + FAST, capsys)
    res = json.loads(out)
    assert code == 0
    assert F(1, 2) - F(1, 100) <= F(res["lower"]) <= F(1, 2) <= F(res["upper"]) <= F(1, 2) + F(1, 100)
    code, out, _ = _run(["bound", A, B, "--emit", "text"] + FAST, capsys)
    assert out.splitlines()[0].startswith("lower ")


def test_bound_budget_exit_2(tmp_path, capsys):
    r = __import__("random").Random(2)
    A = _write(tmp_path, "a.fsurf", format_surface(random_surface(r)))
    B = _write(tmp_path, "b.fsurf", format_surface(random_surface(r)))
    code, out, _ = _run(["bound", A, B, "--tol", "1/1000000", "--budget", "0"] + FAST, capsys)
    assert code == 2
    assert json.loads(out)["converged"] is False


def test_bound_input_errors(tmp_path, capsys):
    bad = _write(tmp_path, "bad.fsurf", "FSURF 1\nmaxnorm 2\ngrid 1\n0 0\n")
    code, _, err = _run(["bound", bad, bad], capsys)
    assert code == 1 and "bad.fsurf:5:" in err
    A = _write(tmp_path, "a.fsurf", format_surface(plane(0)))
    C = _write(tmp_path, "c.fsurf", format_surface(constant((0, 0))))
    code, _, err = _run(["bound", A, C], capsys)
    assert code == 1 and "metric space" in err
    code, _, _ = _run(["bound", A, str(tmp_path / "missing.fsurf")], capsys)
    assert code == 1


def test_bound_deterministic(tmp_path, capsys):
    r = __import__("random").Random(3)
    A = _write(tmp_path, "a.fsurf", format_surface(random_surface(r)))
    B = _write(tmp_path, "b.fsurf", format_surface(random_surface(r)))
    argv = ["bound", A, B, "--tol", "1/100", "--seed", "7"] + FAST

    def strip(res):
        for h in res["history"] + res["excluded"]:
            h.pop("elapsed_ms", None)
            h.pop("elapsed_s", None)
        return res
    runs = [strip(json.loads(_run(argv, capsys)[1])) for _ in range(2)]
    assert runs[0] == runs[1]


def test_history_replay(tmp_path, capsys):
    r = __import__("random").Random(4)
    SA, SB = random_surface(r), random_surface(r)
    A = _write(tmp_path, "a.fsurf", format_surface(SA))
    B = _write(tmp_path, "b.fsurf", format_surface(SB))
    code, out, _ = _run(["bound", A, B, "--tol", "1/100", "--net", "0,1,2"] + FAST, capsys)
    res = json.loads(out)
    for h in res["history"] + res["excluded"]:
        p = h["params"]
        value = F(h.get("bound", h.get("value")))
        prov = h["provenance"]
        if prov == "Trivial":
            want = F(0) if h["side"] == "lower" else trivial_upper(SA, SB)
        elif prov == "HausdorffImages":
            want = hausdorff_images(SA, SB, F(p["tol"])).lo
        elif prov == "BoundaryCurves":
            want = boundary_lower_bound(SA, SB, F(p["tol"])).lo
        elif prov == "CertifiedPair":
            phi, psi = map_from_json(p["k"], p["phi_images"]), map_from_json(p["k"], p["psi_images"])
            assert phi.digest() == p["phi"] and psi.digest() == p["psi"]
            want = objective(ObjectivePair(SA, SB, phi, psi), F(p["tol"])).hi
        elif prov == "NetMinimum":
            nb = lower_bound_enumerate(SA, SB, p["n"], p["k"], F(p["delta"]))
            want = max(nb.value, F(0))
            assert p["net_size"] == nb.net_size
        else:
            raise AssertionError(prov)
        assert value == want, prov
    assert any(h["provenance"] == "NetMinimum" for h in res["excluded"])


def test_history_monotone(tmp_path, capsys):
    r = __import__("random").Random(5)
    A = _write(tmp_path, "a.fsurf", format_surface(random_surface(r)))
    B = _write(tmp_path, "b.fsurf", format_surface(random_surface(r)))
    res = json.loads(_run(["bound", A, B] + FAST, capsys)[1])
    lows = [F(h["bound"]) for h in res["history"] if h["side"] == "lower"]
    ups = [F(h["bound"]) for h in res["history"] if h["side"] == "upper"]
    assert lows == sorted(lows) and ups == sorted(ups, reverse=True)
    assert max(lows) <= min(ups)


def test_degree_cli(tmp_path, capsys):
    I = _write(tmp_path, "id.fmap", format_map(GridMap.identity(2)))
    code, out, _ = _run(["degree", I, "--target", "1/2,1/2"], capsys)
    assert code == 0 and out.splitlines()[0] == "1" and "witness" in out
    H = _write(tmp_path, "h.fmap", format_map(GridMap.from_function(2, lambda p: (p[0] / 2, p[1]))))
    code, out, _ = _run(["degree", H, "--target", "3/4,1/2", "--emit", "json"], capsys)
    assert code == 0 and json.loads(out)["degree"] == 0
    code, _, err = _run(["degree", I, "--target", "0,1/2"], capsys)
    assert code == 3 and "degree undefined" in err
    code, out, _ = _run(["degree", I, "--region", "cells:4:1,1;2,1", "--target", "1/2,3/8"], capsys)
    assert code == 0 and out.splitlines()[0] == "1"
    code, out, _ = _run(["degree", I, "--region", "poly:0,0;1,0;0,1", "--target", "1/4,1/4"], capsys)
    assert code == 0 and out.splitlines()[0] == "1"
    code, _, _ = _run(["degree", I, "--region", "blob", "--target", "1/4,1/4"], capsys)
    assert code == 1


def test_autocert_cli(tmp_path, capsys):
    R = _write(tmp_path, "r.fmap", format_map(rotation_map(2)))
    code, out, _ = _run(["autocert", R], capsys)
    assert code == 0 and json.loads(out)["result"] == "certificate"
    C = _write(tmp_path, "c.fmap", format_map(GridMap(1, ((F(1, 2), F(1, 2)),) * 4)))
    res = json.loads(_run(["autocert", C], capsys)[1])
    assert res["result"] == "violation" and res["violation"]["kind"] == "NotBoundaryPreserving"
    Fo = _write(tmp_path, "f.fmap", format_map(GridMap.from_function(2, lambda p: (1 - abs(2 * p[0] - 1), p[1]))))
    res = json.loads(_run(["autocert", Fo], capsys)[1])
    assert res["result"] == "violation" and res["violation"]["kind"] == "BoundaryNotMonotone"
    bad = _write(tmp_path, "bad.fmap", "FMAP 1\ngrid 1\n")
    assert _run(["autocert", bad], capsys)[0] == 1


def test_boundary_lb_cli(tmp_path, capsys):
    A = _write(tmp_path, "a.fsurf", format_surface(plane(0)))
    B = _write(tmp_path, "b.fsurf", format_surface(plane(F(1, 4))))
    code, out, _ = _run(["boundary-lb", A, A], capsys)
    assert code == 0 and json.loads(out)["lower"] == "0"
    code, out, _ = _run(["boundary-lb", A, B, "--tol", "1/100"], capsys)
    res = json.loads(out)
    assert F(1, 4) - F(1, 100) <= F(res["lower"]) <= F(1, 4)


def test_worker_env(monkeypatch):
    monkeypatch.delenv("FRECHET_THREADS", raising=False)
    assert worker_count() == 1
    monkeypatch.setenv("FRECHET_THREADS", "3")
    assert worker_count() == 3
    monkeypatch.setenv("FRECHET_THREADS", "0")
    with pytest.raises(ValueError):
        worker_count()


def test_module_entry_point(tmp_path):
    A = _write(tmp_path, "a.fsurf", format_surface(plane(0)))
    out = subprocess.run([sys.executable, "-m", "plfrechet", "boundary-lb", A, A],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert json.loads(out.stdout)["lower"] == "0"
    assert out.stdout.endswith("\n")
