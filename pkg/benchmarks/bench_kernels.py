"""Compare the compiled kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Times ``member_scores``, one ``coordinate_sweep`` and ``bound_batch`` on
both backends with identical inputs and prints the median wall time and
the speedup. Inputs are seeded, so repeated runs time the same work.
"""
import argparse
import statistics
import time

import numpy as np

from entangleswap import _kernels_py

try:
    from entangleswap import _kernels as _kernels_c
except ImportError:
    _kernels_c = None


def members(rng, m, d):
    x = rng.standard_normal((m, d * d)) + 1j * rng.standard_normal((m, d * d))
    return x / np.sqrt(np.sum(np.abs(x) ** 2))


def cases(rng):
    x2, x3 = members(rng, 16, 2), members(rng, 81, 3)
    p, q = rng.dirichlet(np.ones(6), size=5000), rng.dirichlet(np.ones(6), size=5000)
    return [
        ("member_scores d=3 m=81", lambda k: k.member_scores(x3, 3, 3)),
        ("coordinate_sweep d=2 m=16", lambda k: _sweep(k, x2, 2)),
        ("coordinate_sweep d=3 m=81", lambda k: _sweep(k, x3, 3)),
        ("bound_batch d=6 n=5000", lambda k: k.bound_batch(p, q)),
    ]


def _sweep(k, x, d):
    x = x.copy()
    k.coordinate_sweep(x, d, d, 1.0, 0.1, k.member_scores(x, d, d))


def median_time(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(0)
    print(f"{'kernel':<28}{'numpy':>12}{'cython':>12}{'speedup':>10}")
    for name, fn in cases(rng):
        t_py = median_time(lambda: fn(_kernels_py), args.repeat)
        if _kernels_c is None:
            print(f"{name:<28}{t_py * 1e3:>10.2f}ms{'n/a':>12}{'':>10}")
            continue
        t_c = median_time(lambda: fn(_kernels_c), args.repeat)
        print(f"{name:<28}{t_py * 1e3:>10.2f}ms{t_c * 1e3:>10.2f}ms{t_py / t_c:>9.1f}x")


if __name__ == "__main__":
    main()
