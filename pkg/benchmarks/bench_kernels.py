"""Benchmark the compiled kernels against the pure numpy fallback.

Runs every hot kernel on workload shapes taken from the real call sites
(boundary evaluation, certificate distances, the intrinsic-radius Dijkstra,
the embeddedness pair scan), checks that the two backends agree, and prints
a timing table.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time

import numpy as np

from nullcurves import _kernels_py

try:
    from nullcurves import _kernels_cy
except ImportError:
    _kernels_cy = None


def timeit(fn, args, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def workloads(rng):
    cplx = lambda *s: rng.normal(size=s) + 1j * rng.normal(size=s)

    yield "horner_eval (3x1400 @ 4096)", "horner_eval", (
        cplx(3, 1400),
        np.exp(2j * np.pi * np.arange(4096) / 4096),
    )
    yield "min_dist2 (4096 vs 2048, C=3)", "min_dist2", (
        cplx(4096, 3),
        cplx(2048, 3),
    )
    yield "min_dist2_grouped (64x64 vs 64x256)", "min_dist2_grouped", (
        cplx(64, 64, 3),
        cplx(64, 256, 3),
    )
    w = rng.uniform(0.1, 1.0, size=(4, 128, 512))
    src = np.zeros((128, 512), dtype=bool)
    src[0] = True
    yield "dijkstra_polar (128x512)", "dijkstra_polar", (w[0], w[1], w[2], w[3], src)
    yield "pair_scan (N=2000, C=3)", "pair_scan", (
        cplx(2000, 3),
        cplx(2000),
        0.5,
        1e-3,
    )


def agree(a, b):
    if isinstance(a, tuple):
        return all(agree(x, y) for x, y in zip(a, b))
    return np.allclose(a, b, rtol=1e-12, atol=1e-12)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    if _kernels_cy is None:
        print("compiled backend not available; timing the fallback only")
    rng = np.random.default_rng(0)
    rows = []
    for label, name, payload in workloads(rng):
        t_py, out_py = timeit(getattr(_kernels_py, name), payload, args.repeat)
        if _kernels_cy is None:
            rows.append((label, t_py, None, None))
            continue
        t_cy, out_cy = timeit(getattr(_kernels_cy, name), payload, args.repeat)
        assert agree(out_py, out_cy), "backends disagree on %s" % label
        rows.append((label, t_py, t_cy, t_py / t_cy))

    width = max(len(r[0]) for r in rows)
    print("%-*s %10s %10s %8s" % (width, "kernel", "python", "cython", "speedup"))
    for label, t_py, t_cy, ratio in rows:
        if t_cy is None:
            print("%-*s %9.1fms %10s %8s" % (width, label, 1e3 * t_py, "-", "-"))
        else:
            print(
                "%-*s %9.1fms %8.1fms %7.1fx"
                % (width, label, 1e3 * t_py, 1e3 * t_cy, ratio)
            )


if __name__ == "__main__":
    main()
