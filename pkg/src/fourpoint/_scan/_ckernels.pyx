# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled scan kernels over distinct 4-subsets in lexicographic rank order.

Same chunk/tie-break contract as _pykernels; see fourpoint._scan.__doc__.
"""

from libc.math cimport exp, INFINITY


cdef inline void _unrank(long long n, long long r, long long* q) noexcept nogil:
    cdef long long i = 0, j, k, c
    while True:
        c = (n - 1 - i) * (n - 2 - i) * (n - 3 - i) / 6
        if r < c:
            break
        r -= c
        i += 1
    j = i + 1
    while True:
        c = (n - 1 - j) * (n - 2 - j) / 2
        if r < c:
            break
        r -= c
        j += 1
    k = j + 1
    while True:
        c = n - 1 - k
        if r < c:
            break
        r -= c
        k += 1
    q[0] = i
    q[1] = j
    q[2] = k
    q[3] = k + 1 + r


cdef inline double _max6(double a, double b, double c, double d, double e, double f) noexcept nogil:
    cdef double m = a
    if b > m: m = b
    if c > m: m = c
    if d > m: m = d
    if e > m: m = e
    if f > m: m = f
    return m


def scan_products(double[:, ::1] fmat, long long start, long long stop):
    cdef long long n = fmat.shape[0]
    cdef long long q[4]
    cdef long long i, j, k, l, r, best_r = -1
    cdef double p0, p1, p2, v, best = -INFINITY
    cdef int best_p = -1
    if stop <= start:
        return None
    _unrank(n, start, q)
    i = q[0]; j = q[1]; k = q[2]; l = q[3]
    with nogil:
        r = start
        while r < stop:
            p0 = fmat[i, k] * fmat[j, l]
            p1 = fmat[i, j] * fmat[k, l]
            p2 = fmat[i, l] * fmat[j, k]
            if p0 > 0:
                v = (p0 - p1 - p2) / p0
                if v > best:
                    best = v; best_r = r; best_p = 0
            if p1 > 0:
                v = (p1 - p0 - p2) / p1
                if v > best:
                    best = v; best_r = r; best_p = 1
            if p2 > 0:
                v = (p2 - p0 - p1) / p2
                if v > best:
                    best = v; best_r = r; best_p = 2
            l += 1
            if l == n:
                k += 1
                if k == n - 1:
                    j += 1
                    if j == n - 2:
                        i += 1
                        j = i + 1
                    k = j + 1
                l = k + 1
            r += 1
    if best_r < 0:
        return None
    return best, best_r, best_p


def scan_fourpoint(double[:, ::1] dmat, long long start, long long stop):
    cdef long long n = dmat.shape[0]
    cdef long long q[4]
    cdef long long i, j, k, l, r, best_r = -1
    cdef double s0, s1, s2, top, second, v, best = -INFINITY
    cdef int best_p = -1, p
    if stop <= start:
        return None
    _unrank(n, start, q)
    i = q[0]; j = q[1]; k = q[2]; l = q[3]
    with nogil:
        r = start
        while r < stop:
            s0 = dmat[i, k] + dmat[j, l]
            s1 = dmat[i, j] + dmat[k, l]
            s2 = dmat[i, l] + dmat[j, k]
            top = s0; p = 0
            if s1 > top:
                top = s1; p = 1
            if s2 > top:
                top = s2; p = 2
            if p == 0:
                second = s1 if s1 > s2 else s2
            elif p == 1:
                second = s0 if s0 > s2 else s2
            else:
                second = s0 if s0 > s1 else s1
            v = top - second
            if v > best:
                best = v; best_r = r; best_p = p
            l += 1
            if l == n:
                k += 1
                if k == n - 1:
                    j += 1
                    if j == n - 2:
                        i += 1
                        j = i + 1
                    k = j + 1
                l = k + 1
            r += 1
    if best_r < 0:
        return None
    return best, best_r, best_p


def scan_apt(double[:, ::1] umat, long long start, long long stop):
    cdef long long n = umat.shape[0]
    cdef long long q[4]
    cdef long long i, j, k, l, r
    cdef long long bre = -1, brs = -1
    cdef double ua0, ub0, ua1, ub1, ua2, ub2, m
    cdef double e0, e1, e2, b0, b1, b2, v
    cdef double beste = -INFINITY, bests = -INFINITY
    cdef int bpe = -1, bps = -1
    if stop <= start:
        return None
    _unrank(n, start, q)
    i = q[0]; j = q[1]; k = q[2]; l = q[3]
    with nogil:
        r = start
        while r < stop:
            ua0 = umat[i, k]; ub0 = umat[j, l]
            ua1 = umat[i, j]; ub1 = umat[k, l]
            ua2 = umat[i, l]; ub2 = umat[j, k]
            m = _max6(ua0, ub0, ua1, ub1, ua2, ub2)
            e0 = exp(ua0 + ub0 - m)
            e1 = exp(ua1 + ub1 - m)
            e2 = exp(ua2 + ub2 - m)
            v = e0 - e1 - e2
            if v > beste:
                beste = v; bre = r; bpe = 0
            v = e1 - e0 - e2
            if v > beste:
                beste = v; bre = r; bpe = 1
            v = e2 - e0 - e1
            if v > beste:
                beste = v; bre = r; bpe = 2
            b0 = (e0 - exp(ua0 - ub0 - m) - exp(ub0 - ua0 - m) + exp(-ua0 - ub0 - m)) * 0.25
            b1 = (e1 - exp(ua1 - ub1 - m) - exp(ub1 - ua1 - m) + exp(-ua1 - ub1 - m)) * 0.25
            b2 = (e2 - exp(ua2 - ub2 - m) - exp(ub2 - ua2 - m) + exp(-ua2 - ub2 - m)) * 0.25
            v = b0 - b1 - b2
            if v > bests:
                bests = v; brs = r; bps = 0
            v = b1 - b0 - b2
            if v > bests:
                bests = v; brs = r; bps = 1
            v = b2 - b0 - b1
            if v > bests:
                bests = v; brs = r; bps = 2
            l += 1
            if l == n:
                k += 1
                if k == n - 1:
                    j += 1
                    if j == n - 2:
                        i += 1
                        j = i + 1
                    k = j + 1
                l = k + 1
            r += 1
    if bre < 0:
        return None
    return beste, bre, bpe, bests, brs, bps
