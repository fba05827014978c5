#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-numpy fallback.

Times the two hot paths of the package, the Gauss 2F1 series batch behind
the Legendre evaluations and the per-cell local-matrix assembly behind the
finite-element solver, and prints a comparison table. Run after building
the extension in place:

    python benchmarks/bench_kernels.py [--grid-n 96] [--points 200000] [--repeat 5]
"""
import argparse
import math
import time

import numpy as np

from spheregap import _kernels_np

try:
    from spheregap import _kernels_cy
except ImportError:
    _kernels_cy = None


def _time(fn, repeat):
    best = math.inf
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_series(points, repeat):
    rng = np.random.default_rng(0)
    w = rng.uniform(0.0, 0.5, size=points)
    a, b, c = 8.5, -7.5, 3.5  # a mid-range non-integer Legendre mode
    rows = []
    ref = None
    for name, mod in (("numpy", _kernels_np), ("cython", _kernels_cy)):
        if mod is None:
            continue
        vals, conv, _ = mod.hyp2f1_batch(a, b, c, w, 1e-13, 800)
        assert conv.all()
        if ref is None:
            ref = vals
        else:
            assert np.max(np.abs(vals - ref)) < 1e-12
        rows.append((name, _time(lambda m=mod: m.hyp2f1_batch(a, b, c, w, 1e-13, 800),
                                 repeat)))
    return rows


def bench_assembly(grid_n, repeat):
    from spheregap.fem import _reference_basis
    from spheregap.geometry import DeformationParams, metric_coefficients

    params = DeformationParams(0.6, 0.8, 0.05)
    n = grid_n
    hx = hy = (math.pi / 2) / (n - 1)
    wq, phi, dphx, dphy = _reference_basis()
    nodes = np.array([0.5 - math.sqrt(15) / 10, 0.5, 0.5 + math.sqrt(15) / 10])
    ci, cj = np.meshgrid(np.arange(n - 1), np.arange(n - 1), indexing="ij")
    ci, cj = ci.ravel(), cj.ravel()
    xi, eta = np.meshgrid(nodes, nodes, indexing="ij")
    rq = (ci[:, None] + xi.ravel()[None, :]) * hx
    tq = (cj[:, None] + eta.ravel()[None, :]) * hy
    w11, w12, w22, m = metric_coefficients(params, rq, tq)
    scale = wq[None, :] * hx * hy
    args = (w11 * scale / hx**2, w12 * scale / (hx * hy), w22 * scale / hy**2,
            m * scale, phi, dphx, dphy)
    rows = []
    ref = None
    for name, mod in (("numpy", _kernels_np), ("cython", _kernels_cy)):
        if mod is None:
            continue
        k, _ = mod.local_matrices(*args)
        if ref is None:
            ref = k
        else:
            assert np.max(np.abs(k - ref)) < 1e-12 * np.max(np.abs(ref))
        rows.append((name, _time(lambda m_=mod: m_.local_matrices(*args), repeat)))
    return rows


def _print_table(title, rows):
    print(f"\n{title}")
    base = rows[0][1]
    for name, t in rows:
        print(f"  {name:<8s} {t * 1e3:9.2f} ms   x{base / t:5.2f}")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--points", type=int, default=200_000,
                        help="series batch size")
    parser.add_argument("--grid-n", type=int, default=96, dest="grid_n",
                        help="assembly grid nodes per axis")
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if _kernels_cy is None:
        print("compiled extension not available; timing the fallback only")
    _print_table(f"2F1 series batch, {args.points} points",
                 bench_series(args.points, args.repeat))
    for n in (args.grid_n, 2 * args.grid_n):
        _print_table(f"local matrices, grid_n={n} ({(n - 1) ** 2} cells)",
                     bench_assembly(n, args.repeat))


if __name__ == "__main__":
    main()
