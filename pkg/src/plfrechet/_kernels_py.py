"""Pure-Python float kernels, used when the compiled extension is unavailable.

Every arithmetic step matches ``_kernels.pyx`` in order, so both return the
same doubles.
"""

from __future__ import annotations

import math


def _pl_eval(v, k, d, x, y):
    sx = x * k
    sy = y * k
    i = int(sx)
    j = int(sy)
    if i > k - 1:
        i = k - 1
    if j > k - 1:
        j = k - 1
    u = sx - i
    w = sy - j
    i00 = (j * (k + 1) + i) * d
    i10 = i00 + d
    i01 = i00 + (k + 1) * d
    i11 = i01 + d
    if w <= u:
        return [v[i00 + c] + u * (v[i10 + c] - v[i00 + c]) + w * (v[i11 + c] - v[i10 + c]) for c in range(d)]
    return [v[i00 + c] + u * (v[i11 + c] - v[i01 + c]) + w * (v[i01 + c] - v[i00 + c]) for c in range(d)]


def _dist(p, q, euclid):
    acc = 0.0
    if euclid:
        for a, b in zip(p, q):
            t = a - b
            acc = acc + t * t
        return math.sqrt(acc)
    for a, b in zip(p, q):
        t = abs(a - b)
        if t > acc:
            acc = t
    return acc


def sampled_objective(a_vals, ma, b_vals, mb, d, phi, kphi, psi, kpsi, n, euclid):
    best = 0.0
    for b in range(n + 1):
        y = b / n
        for a in range(n + 1):
            x = a / n
            fp = _pl_eval(phi, kphi, 2, x, y)
            gp = _pl_eval(psi, kpsi, 2, x, y)
            pa = _pl_eval(a_vals, ma, d, fp[0], fp[1])
            pb = _pl_eval(b_vals, mb, d, gp[0], gp[1])
            val = _dist(pa, pb, euclid)
            if val > best:
                best = val
    return best


def discrete_closed_frechet(P, n, Q, m, d, euclid):
    pts_p = [P[i * d:(i + 1) * d] for i in range(n)]
    pts_q = [Q[j * d:(j + 1) * d] for j in range(m)]
    best = -1.0
    for s in range(m):
        row_prev = [0.0] * (m + 1)
        row_cur = [0.0] * (m + 1)
        for i in range(n + 1):
            for j in range(m + 1):
                v = _dist(pts_p[i % n], pts_q[(s + j) % m], euclid)
                if i == 0 and j == 0:
                    prev = v
                elif i == 0:
                    prev = row_cur[j - 1]
                elif j == 0:
                    prev = row_prev[0]
                else:
                    prev = row_prev[j]
                    if row_prev[j - 1] < prev:
                        prev = row_prev[j - 1]
                    if row_cur[j - 1] < prev:
                        prev = row_cur[j - 1]
                if prev > v:
                    v = prev
                row_cur[j] = v
            row_prev, row_cur = row_cur, row_prev
        if best < 0 or row_prev[m] < best:
            best = row_prev[m]
    return best
