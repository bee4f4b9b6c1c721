"""Compare the compiled and pure-Python screening kernels.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time

from plfrechet import kernels
from plfrechet.plmap import GridMap, GridSurface, grid_vertices, rotation_map
from plfrechet.scalar import MaxNorm


def fixtures(m=4):
    V = grid_vertices(m)
    A = GridSurface(m, MaxNorm(3), tuple((x, y, x * y) for x, y in V))
    B = GridSurface(m, MaxNorm(3), tuple((y, x, x * x - y) for x, y in V))
    return kernels.PackedSurface(A), kernels.PackedSurface(B)


def curve(n, r):
    pts = []
    for i in range(n):
        t = i / n
        pts.append((r * (1 + 0.3 * ((7 * i) % 5) / 5) * (1 - 2 * t), r * t * t))
    return pts


def timed(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    impls = kernels.backends()
    pa, pb = fixtures()
    phi, psi = GridMap.identity(4), rotation_map(4)
    P, Q = curve(60, 1.0), curve(50, 1.3)
    print(f"default backend: {kernels.BACKEND}")
    results = {}
    for name, impl in impls.items():
        t1, v1 = timed(lambda: kernels.sampled_objective(pa, pb, phi, psi, 128, impl), args.repeat)
        t2, v2 = timed(lambda: kernels.discrete_closed_frechet(P, Q, False, impl), args.repeat)
        results[name] = (v1, v2)
        print(f"{name:9s} sampled_objective(129x129) {t1 * 1e3:9.2f} ms   "
              f"discrete_closed_frechet(60x50) {t2 * 1e3:9.2f} ms")
    if len(results) == 2:
        same = results["python"] == results["compiled"]
        print(f"identical results: {same}")
    return results


if __name__ == "__main__":
    main()
