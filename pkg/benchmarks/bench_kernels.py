#!/usr/bin/env python3
"""
Kernel benchmark: numba-compiled kernels against the pure-numpy fallback.

Both paths are imported from the same module, so the environment flag is not
needed here.  Prints one line per kernel with median timings and the maximum
absolute difference between the two outputs; ``--json`` dumps the same data.
"""

import argparse
import json
import math
import statistics
import sys
import time

import numpy as np

from lrberry import kernels


def _median_time(fn, args, runs):
    fn(*args)  # warmup, includes compilation for the numba path
    times = []
    for _ in range(runs):
        start = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - start)
    return statistics.median(times)


def _diff(a, b):
    if isinstance(a, tuple):
        return max(_diff(x, y) for x, y in zip(a, b) if isinstance(x, np.ndarray))
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def cases(scale):
    steps = 2000 * scale
    t = np.linspace(0.0, 200.0, 2 * steps + 1)
    phi = 2 * math.pi * t / 200.0
    c0 = np.full_like(t, 5.0)
    lam = np.ones_like(t)
    theta0 = math.atanh(-2.0 / 5.0)
    rho = np.linspace(0.0, 8.0, 4000 * scale)
    return {
        "rk4_auxiliary": (
            kernels.rk4_auxiliary_py, kernels.rk4_auxiliary_nb,
            (c0, lam, phi, theta0, math.pi, 200.0 / steps, True),
        ),
        "laguerre": (kernels.laguerre_py, kernels.laguerre_nb, (40, 1.5, rho)),
        "pncs_su11": (
            kernels.pncs_su11_py, kernels.pncs_su11_nb,
            (0.5, 3, 0.6, 0.4, math.log(1 - 0.36), 400 * scale),
        ),
        "pncs_su2": (
            kernels.pncs_su2_py, kernels.pncs_su2_nb,
            (10.0, 2.0, 0.8, 1.1, math.log(1 + 0.64)),
        ),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.strip().splitlines()[0])
    ap.add_argument("--runs", type=int, default=5)
    ap.add_argument("--scale", type=int, default=1, help="problem size multiplier")
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)

    if kernels.rk4_auxiliary_nb is None:
        print("numba is not installed; nothing to compare", file=sys.stderr)
        return 1

    results = []
    for name, (py, nb, fargs) in cases(args.scale).items():
        t_py = _median_time(py, fargs, args.runs)
        t_nb = _median_time(nb, fargs, args.runs)
        results.append(
            {
                "kernel": name,
                "numpy_s": t_py,
                "numba_s": t_nb,
                "speedup": t_py / t_nb if t_nb > 0 else float("inf"),
                "max_abs_diff": _diff(py(*fargs), nb(*fargs)),
            }
        )

    if args.json:
        print(json.dumps(results, indent=2))
    else:
        print(f"{'kernel':<15}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>10}{'max diff':>12}")
        for r in results:
            print(
                f"{r['kernel']:<15}{1e3 * r['numpy_s']:>12.3f}{1e3 * r['numba_s']:>12.3f}"
                f"{r['speedup']:>10.1f}{r['max_abs_diff']:>12.2e}"
            )
    return 0


if __name__ == "__main__":
    sys.exit(main())
