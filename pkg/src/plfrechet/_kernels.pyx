# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled float kernels. Mirrors ``_kernels_py`` operation for operation."""

from libc.math cimport sqrt, fabs


cdef inline void _pl_eval(const double[::1] v, int k, int d, double x, double y, double* out) noexcept nogil:
    cdef double sx = x * k
    cdef double sy = y * k
    cdef int i = <int>sx
    cdef int j = <int>sy
    cdef int c, i00, i10, i01, i11
    cdef double u, w
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
        for c in range(d):
            out[c] = v[i00 + c] + u * (v[i10 + c] - v[i00 + c]) + w * (v[i11 + c] - v[i10 + c])
    else:
        for c in range(d):
            out[c] = v[i00 + c] + u * (v[i11 + c] - v[i01 + c]) + w * (v[i01 + c] - v[i00 + c])


cdef inline double _dist(const double* p, const double* q, int d, int euclid) noexcept nogil:
    cdef double acc = 0.0
    cdef double t
    cdef int c
    if euclid:
        for c in range(d):
            t = p[c] - q[c]
            acc = acc + t * t
        return sqrt(acc)
    for c in range(d):
        t = fabs(p[c] - q[c])
        if t > acc:
            acc = t
    return acc


def sampled_objective(const double[::1] a_vals, int ma, const double[::1] b_vals, int mb, int d,
                      const double[::1] phi, int kphi, const double[::1] psi, int kpsi,
                      int n, int euclid):
    """Max of ``d(A(phi(x)), B(psi(x)))`` over the ``(n+1) x (n+1)`` sample grid."""
    cdef double best = 0.0
    cdef double x, y, val
    cdef double fp[2]
    cdef double gp[2]
    cdef double pa[64]
    cdef double pb[64]
    cdef int a, b
    if d > 64:
        raise ValueError("dimension above 64 not supported by the compiled kernel")
    with nogil:
        for b in range(n + 1):
            y = <double>b / n
            for a in range(n + 1):
                x = <double>a / n
                _pl_eval(phi, kphi, 2, x, y, fp)
                _pl_eval(psi, kpsi, 2, x, y, gp)
                _pl_eval(a_vals, ma, d, fp[0], fp[1], pa)
                _pl_eval(b_vals, mb, d, gp[0], gp[1], pb)
                val = _dist(pa, pb, d, euclid)
                if val > best:
                    best = val
    return best


def discrete_closed_frechet(const double[::1] P, int n, const double[::1] Q, int m, int d, int euclid):
    """Discrete Fréchet distance of closed vertex sequences, minimised over base points of ``Q``."""
    cdef double best = -1.0
    cdef int s, i, j
    cdef double v, prev
    cdef double[::1] row_prev, row_cur, tmp
    import array
    row_prev = array.array("d", [0.0]) * (m + 1)
    row_cur = array.array("d", [0.0]) * (m + 1)
    with nogil:
        for s in range(m):
            for i in range(n + 1):
                for j in range(m + 1):
                    v = _dist(&P[(i % n) * d], &Q[((s + j) % m) * d], d, euclid)
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
                tmp = row_prev
                row_prev = row_cur
                row_cur = tmp
            if best < 0 or row_prev[m] < best:
                best = row_prev[m]
    return best
