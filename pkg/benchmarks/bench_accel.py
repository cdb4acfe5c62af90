"""Compare the compiled pair-scan kernels against the pure-Python path.

Runs the three hot kernels on identical inputs through both backends,
reports best-of-five wall times, and asserts the results agree bit for
bit (the two implementations share their reduction order on purpose).

Usage: python3 benchmarks/bench_accel.py [n]
"""

import sys
import time

import numpy as np

from reachsmooth._accel import _slow

try:
    from reachsmooth._accel import _fast
except ImportError:
    _fast = None


def _time(fn, *args, repeats=5):
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 2000
    theta = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    pts = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    tans = np.stack([-np.sin(theta), np.cos(theta)], axis=1)
    rng = np.random.default_rng(0)
    xs = np.sort(rng.uniform(-1.0, 1.0, n))
    vals = np.cumsum(rng.uniform(-1.0, 1.0, n)) * (2.0 / n)
    other = pts + rng.normal(scale=1e-3, size=pts.shape)
    min_sep = 4.0 * np.pi / n

    cases = [
        ("federer_scan", (pts, tans, min_sep)),
        ("max_abs_diff_quotient", (xs, vals)),
        ("directed_hausdorff", (pts, other)),
    ]

    print(f"n = {n}")
    print(f"{'kernel':24s} {'python':>12s} {'compiled':>12s} {'speedup':>9s}")
    for name, args in cases:
        t_py, out_py = _time(getattr(_slow, name), *args)
        if _fast is None:
            print(f"{name:24s} {t_py * 1e3:10.2f}ms {'n/a':>12s} {'n/a':>9s}")
            continue
        t_c, out_c = _time(getattr(_fast, name), *args)
        flat_py = np.asarray(out_py, dtype=object).ravel()
        flat_c = np.asarray(out_c, dtype=object).ravel()
        agree = all(float(a) == float(b) or (np.isinf(float(a)) and np.isinf(float(b)))
                    for a, b in zip(flat_py, flat_c))
        mark = "" if agree else "  RESULTS DIFFER"
        print(f"{name:24s} {t_py * 1e3:10.2f}ms {t_c * 1e3:10.2f}ms "
              f"{t_py / t_c:8.1f}x{mark}")
        if not agree:
            raise SystemExit(f"{name}: backend results disagree")
    print("backend results agree bit for bit")


if __name__ == "__main__":
    main()
