import os
import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from plfrechet.plmap import GridMap, GridSurface, grid_vertices
from plfrechet.scalar import MaxNorm

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

F = Fraction


def surface_from(fn, m=2, space=None):
    space = space or MaxNorm(3)
    return GridSurface(m, space, tuple(tuple(fn(x, y)) for x, y in grid_vertices(m)))


def plane(h, m=2):
    return surface_from(lambda x, y: (x, y, h), m)


def constant(p, m=2):
    return surface_from(lambda x, y: p, m, MaxNorm(len(p)))


def random_surface(rng: random.Random, m=2, d=3, den=4):
    return GridSurface(m, MaxNorm(d), tuple(
        tuple(F(rng.randint(-den, den), den) for _ in range(d)) for _ in range((m + 1) ** 2)))


def random_grid_map(rng: random.Random, k=2, den=4):
    return GridMap(k, tuple((F(rng.randint(0, den), den), F(rng.randint(0, den), den))
                            for _ in range((k + 1) ** 2)))


@pytest.fixture
def rng():
    return random.Random(12345)


# criterion number -> (passed, description); filled by test_acceptance.py
ACCEPTANCE = {}


def record(number, title, ok, detail=""):
    ACCEPTANCE[number] = (ok, title, detail)
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, title, detail = ACCEPTANCE[number]
        line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}"
        terminalreporter.write_line(line + (f"  ({detail})" if detail else ""))
