# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled merge loops for step CDFs.

A step CDF is passed as ``(locs, cum)``: strictly increasing atom locations and
the CDF value just right of each atom (last entry exactly 1).
"""

import numpy as np

from libc.math cimport INFINITY


def step_wcrps(const double[::1] locs, const double[::1] cum,
               const double[::1] z, double q):
    """wCRPS of a step CDF at sorted points ``z`` (each already ``>= q``).

    score(z) = int_q^z F(x)^2 dx + int_z^inf (1 - F(x))^2 dx
    """
    cdef Py_ssize_t m = locs.shape[0], n = z.shape[0]
    cdef Py_ssize_t i, j
    cdef double[::1] pf = np.empty(m, dtype=np.float64)
    cdef double[::1] ps = np.empty(m + 1, dtype=np.float64)
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double acc, t, pz, uz, pq

    # pf[j] = int_{locs[0]}^{locs[j]} F^2
    pf[0] = 0.0
    for j in range(1, m):
        pf[j] = pf[j - 1] + cum[j - 1] * cum[j - 1] * (locs[j] - locs[j - 1])
    # ps[j] = int_{locs[j]}^{locs[m-1]} (1 - F)^2
    ps[m - 1] = 0.0
    ps[m] = 0.0
    for j in range(m - 2, -1, -1):
        acc = 1.0 - cum[j]
        ps[j] = ps[j + 1] + acc * acc * (locs[j + 1] - locs[j])

    # P(q)
    pq = 0.0
    if q > -INFINITY:
        j = 0
        while j < m and locs[j] <= q:
            j += 1
        if j > 0:
            if j == m:
                pq = pf[m - 1] + (q - locs[m - 1])
            else:
                pq = pf[j - 1] + cum[j - 1] * cum[j - 1] * (q - locs[j - 1])

    # j counts atoms <= z[i]; z is sorted so j only moves forward
    j = 0
    for i in range(n):
        t = z[i]
        while j < m and locs[j] <= t:
            j += 1
        if j == 0:
            pz = 0.0
            uz = (locs[0] - t) + ps[0]
        elif j == m:
            pz = pf[m - 1] + (t - locs[m - 1])
            uz = 0.0
        else:
            pz = pf[j - 1] + cum[j - 1] * cum[j - 1] * (t - locs[j - 1])
            acc = 1.0 - cum[j - 1]
            uz = acc * acc * (locs[j] - t) + ps[j]
        out[i] = (pz - pq) + uz
    return out_arr


def step_pair_integrals(const double[::1] la, const double[::1] ca,
                        const double[::1] lb, const double[::1] cb,
                        const double[::1] lt, const double[::1] ct, double q):
    """Exact ``(int (A-T)^2, int (B-T)^2, int T(1-T))`` over ``[q, inf)``."""
    cdef Py_ssize_t na = la.shape[0], nb = lb.shape[0], nt = lt.shape[0]
    cdef Py_ssize_t i = 0, j = 0, k = 0
    cdef double av = 0.0, bv = 0.0, tv = 0.0
    cdef double prev = -INFINITY, x, lo, w, d
    cdef double i1 = 0.0, i2 = 0.0, i3 = 0.0
    while i < na or j < nb or k < nt:
        x = INFINITY
        if i < na and la[i] < x:
            x = la[i]
        if j < nb and lb[j] < x:
            x = lb[j]
        if k < nt and lt[k] < x:
            x = lt[k]
        if prev > -INFINITY:
            lo = prev if prev > q else q
            w = x - lo
            if w > 0:
                d = av - tv
                i1 += d * d * w
                d = bv - tv
                i2 += d * d * w
                i3 += tv * (1.0 - tv) * w
        if i < na and la[i] == x:
            av = ca[i]
            i += 1
        if j < nb and lb[j] == x:
            bv = cb[j]
            j += 1
        if k < nt and lt[k] == x:
            tv = ct[k]
            k += 1
        prev = x
    return i1, i2, i3
