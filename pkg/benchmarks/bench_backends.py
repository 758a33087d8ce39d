"""Benchmark the numba kernels against the pure-numpy fallback.

Times the two hot paths on representative workloads:

* jet evaluation of curve coordinates over a sample grid (analysis front end)
* RK4 integration of the frame system with per-step re-orthonormalization

plus the end-to-end pipelines built on them.  Run from the repo root::

    python benchmarks/bench_backends.py [--repeats N]
"""

from __future__ import annotations

import argparse
import math
import time

import numpy as np

from helixlab import _backend
from helixlab import expressions as ex
from helixlab.config import Config
from helixlab.helix import analyze
from helixlab.jets import CurveSpec, curve_jets_grid
from helixlab.metric import MetricSignature
from helixlab.sampled import analyze_sampled
from helixlab.synthesis import integrate_frenet, slant_family

HELIX = CurveSpec(
    metric=MetricSignature.euclidean(3),
    coordinates=tuple(
        ex.parse_expr(t)
        for t in ("2*cos(s/sqrt(5))", "2*sin(s/sqrt(5))", "s/sqrt(5)")
    ),
    domain=(0.0, 4.0 * math.pi),
    samples=400,
)

SINE4 = slant_family(4, c1=1.0, c2=1.0, amplitude=0.8, delta=0.2)


def bench(fn, repeats: int) -> float:
    fn()  # warm (jit compile / cache load)
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def workloads():
    grid = np.linspace(0.0, 4.0 * math.pi, 2000)
    return [
        ("jet eval, 3 coords x 2000 pts, order 8",
         lambda: curve_jets_grid(HELIX, grid, 8)),
        ("integrate frame system, n=4, 2742 steps",
         lambda: integrate_frenet(SINE4)),
        ("analyze expression curve, 400 samples",
         lambda: analyze(HELIX, Config())),
        ("synthesize + analyze sampled, n=4",
         lambda: analyze_sampled(integrate_frenet(SINE4), Config())),
    ]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    results: dict[str, dict[str, float]] = {}
    for backend in ("numpy", "numba"):
        _backend.use_backend(backend)
        for name, fn in workloads():
            results.setdefault(name, {})[backend] = bench(fn, args.repeats)

    width = max(len(name) for name in results)
    print(f"{'workload':<{width}}  {'numpy':>10}  {'numba':>10}  {'speedup':>8}")
    for name, times in results.items():
        speedup = times["numpy"] / times["numba"]
        print(
            f"{name:<{width}}  {times['numpy'] * 1e3:>8.2f}ms  "
            f"{times['numba'] * 1e3:>8.2f}ms  {speedup:>7.1f}x"
        )


if __name__ == "__main__":
    main()
