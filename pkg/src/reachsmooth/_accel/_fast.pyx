# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled twins of the scan kernels in ``_slow``.

Reduction order matches _slow exactly: per base row, the best forward
ratio is found first (ties keep the earliest index), then the best
reverse ratio, forward preferred on a row-level tie, and the global
minimum only updates on a strict improvement.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, fabs, sqrt

IMPLEMENTATION = "compiled"

DEF DEGENERATE_REL = 1e-14


def federer_scan(points, tangents, double min_sep):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] pts = np.ascontiguousarray(points, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] tan = np.ascontiguousarray(tangents, dtype=np.float64)
    cdef Py_ssize_t n = pts.shape[0]
    cdef double best = INFINITY
    cdef Py_ssize_t bi = -1, bj = -1
    cdef long long pairs = 0
    cdef Py_ssize_t i, j, k1, k2
    cdef double dx, dy, d2, d, guard, cr, r
    cdef double r1best, r2best, row_val
    cdef Py_ssize_t row_i, row_j, m
    for i in range(n - 1):
        r1best = INFINITY
        r2best = INFINITY
        k1 = -1
        k2 = -1
        m = 0
        for j in range(i + 1, n):
            dx = pts[j, 0] - pts[i, 0]
            dy = pts[j, 1] - pts[i, 1]
            d2 = dx * dx + dy * dy
            d = sqrt(d2)
            if d < min_sep:
                continue
            m += 1
            guard = DEGENERATE_REL * d
            cr = fabs(dx * tan[i, 1] - dy * tan[i, 0])
            r = INFINITY if cr <= guard else d2 / (2.0 * cr)
            if r < r1best:
                r1best = r
                k1 = j
            cr = fabs(dx * tan[j, 1] - dy * tan[j, 0])
            r = INFINITY if cr <= guard else d2 / (2.0 * cr)
            if r < r2best:
                r2best = r
                k2 = j
        if m == 0:
            continue
        pairs += 2 * m
        if r1best <= r2best:
            row_val = r1best
            row_i = i
            row_j = k1
        else:
            row_val = r2best
            row_i = k2
            row_j = i
        if row_val < best:
            best = row_val
            bi = row_i
            bj = row_j
    return best, bi, bj, pairs


def max_abs_diff_quotient(xs, vals):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] x = np.ascontiguousarray(xs, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] v = np.ascontiguousarray(vals, dtype=np.float64)
    cdef Py_ssize_t n = x.shape[0]
    cdef double best = 0.0
    cdef Py_ssize_t bi = -1, bj = -1
    cdef Py_ssize_t i, j, rk
    cdef double dx, q, rbest
    for i in range(n - 1):
        rbest = -1.0
        rk = -1
        for j in range(i + 1, n):
            dx = fabs(x[j] - x[i])
            if dx <= 1e-300:
                continue
            q = fabs(v[j] - v[i]) / dx
            if q > rbest:
                rbest = q
                rk = j
        if rk >= 0 and rbest > best:
            best = rbest
            bi = i
            bj = rk
    return best, bi, bj


def directed_hausdorff(a, b):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] pa = np.ascontiguousarray(a, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] pb = np.ascontiguousarray(b, dtype=np.float64)
    cdef Py_ssize_t na = pa.shape[0], nb = pb.shape[0]
    cdef double best = -1.0
    cdef Py_ssize_t bi = -1
    cdef Py_ssize_t i, j
    cdef double dx, dy, d2, mind
    for i in range(na):
        mind = INFINITY
        for j in range(nb):
            dx = pa[i, 0] - pb[j, 0]
            dy = pa[i, 1] - pb[j, 1]
            d2 = dx * dx + dy * dy
            if d2 < mind:
                mind = d2
        mind = sqrt(mind)
        if mind > best:
            best = mind
            bi = i
    return best, bi
