"""Numpy implementations of the quadratic scan kernels.

These are the reference semantics; the Cython module `_fast` mirrors them
loop for loop.  Tie-breaking is first-encountered in the enumeration
order ``for i < j: (i -> j) then (j -> i)`` so both implementations return
identical argmin indices, which in turn keeps CSV output byte-identical
whichever one is loaded.
"""

import numpy as np

IMPLEMENTATION = "python"

_DEGENERATE_REL = 1e-14


def federer_scan(points, tangents, min_sep):
    """Minimum curvature-comparison ratio over all ordered point pairs.

    For each ordered pair (p, q) with |q - p| >= min_sep the ratio is
    |q - p|^2 / (2 * dist(q, tangent line at p)); pairs whose tangent
    distance falls below 1e-14 * |q - p| count as flat (infinite ratio).

    Returns ``(min_ratio, i, j, pairs)`` where (i, j) indexes the
    minimizing (p, q) and pairs counts the ordered pairs considered.
    """
    pts = np.ascontiguousarray(points, dtype=np.float64)
    tan = np.ascontiguousarray(tangents, dtype=np.float64)
    n = pts.shape[0]
    best = np.inf
    bi = bj = -1
    pairs = 0
    for i in range(n - 1):
        dx = pts[i + 1:, 0] - pts[i, 0]
        dy = pts[i + 1:, 1] - pts[i, 1]
        d2 = dx * dx + dy * dy
        d = np.sqrt(d2)
        keep = d >= min_sep
        m = int(np.count_nonzero(keep))
        if m == 0:
            continue
        pairs += 2 * m
        dxk, dyk, d2k, dk = dx[keep], dy[keep], d2[keep], d[keep]
        jidx = np.nonzero(keep)[0] + i + 1
        # q in the tangent line at p counts as flat, not as zero reach
        guard = _DEGENERATE_REL * dk
        cr1 = np.abs(dxk * tan[i, 1] - dyk * tan[i, 0])
        with np.errstate(divide="ignore", over="ignore"):
            r1 = np.where(cr1 <= guard, np.inf, d2k / (2.0 * cr1))
        cr2 = np.abs(dxk * tan[jidx, 1] - dyk * tan[jidx, 0])
        with np.errstate(divide="ignore", over="ignore"):
            r2 = np.where(cr2 <= guard, np.inf, d2k / (2.0 * cr2))
        k1 = int(np.argmin(r1))
        k2 = int(np.argmin(r2))
        if r1[k1] <= r2[k2]:
            row_val, row_i, row_j = r1[k1], i, int(jidx[k1])
        else:
            row_val, row_i, row_j = r2[k2], int(jidx[k2]), i
        if row_val < best:
            best, bi, bj = float(row_val), row_i, row_j
    return best, bi, bj, pairs


def max_abs_diff_quotient(xs, vals):
    """Largest |vals_i - vals_j| / |xs_i - xs_j| over all pairs.

    Pairs closer than 1e-300 in x are skipped.  Returns
    ``(quotient, i, j)``; first-encountered pair wins ties.
    """
    x = np.ascontiguousarray(xs, dtype=np.float64)
    v = np.ascontiguousarray(vals, dtype=np.float64)
    n = x.shape[0]
    best = 0.0
    bi = bj = -1
    for i in range(n - 1):
        dx = np.abs(x[i + 1:] - x[i])
        dv = np.abs(v[i + 1:] - v[i])
        ok = dx > 1e-300
        if not np.any(ok):
            continue
        q = np.where(ok, dv / np.where(ok, dx, 1.0), -1.0)
        k = int(np.argmax(q))
        if q[k] > best:
            best = float(q[k])
            bi, bj = i, i + 1 + k
    return best, bi, bj


def directed_hausdorff(a, b):
    """sup over rows of a of the distance to the point set b.

    Returns ``(value, index)`` with index the maximizing row of a.
    """
    pa = np.ascontiguousarray(a, dtype=np.float64)
    pb = np.ascontiguousarray(b, dtype=np.float64)
    best = -1.0
    bi = -1
    chunk = max(1, int(4e6) // max(1, pb.shape[0]))
    for lo in range(0, pa.shape[0], chunk):
        part = pa[lo:lo + chunk]
        d2 = ((part[:, None, :] - pb[None, :, :]) ** 2).sum(axis=2)
        mins = np.sqrt(d2.min(axis=1))
        k = int(np.argmax(mins))
        if mins[k] > best:
            best = float(mins[k])
            bi = lo + k
    return best, bi
