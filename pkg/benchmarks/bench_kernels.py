"""Compare the numba-compiled kernels against the pure-Python fallbacks.

Usage: python benchmarks/bench_kernels.py [--repeats N]

The same comparison can be driven through the environment: running the whole
package with PRYTZ_NO_NUMBA=1 selects the fallback path everywhere.
"""

import argparse
import math
import time

import numpy as np

from prytz import kernels
from prytz.geom2d import circle_path


def trace_workload():
    circle = circle_path(2.0, n=512)
    verts = np.ascontiguousarray(np.vstack([circle.vertices, circle.vertices[:1]]))
    seglen = np.hypot(*np.diff(verts, axis=0).T)
    nsub = np.maximum(1, np.ceil(seglen / 0.0025)).astype(np.int64)
    total = int(nsub.sum())
    out = [np.empty(total + 1), np.empty(total + 1), np.empty(total + 1),
           np.empty(total + 1), np.empty(total), np.empty(total)]
    return (verts, nsub, -2.0944, 1.0, *out), total


def transport_workload():
    circle = circle_path(2.0, n=512)
    verts = np.ascontiguousarray(np.vstack([circle.vertices, circle.vertices[:1]]))
    seglen = np.hypot(*np.diff(verts, axis=0).T)
    nsub = np.maximum(1, np.ceil(seglen / 0.0025)).astype(np.int64)
    return (verts, nsub, 1.0), int(nsub.sum())


def best_of(fn, args, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    if not kernels.NUMBA_ENABLED:
        print("numba is disabled (PRYTZ_NO_NUMBA set or numba missing); "
              "both columns below run the pure-Python path")

    rows = []
    for name, compiled, fallback, workload in (
            ("rk4_trace", kernels.rk4_trace, kernels.rk4_trace_py, trace_workload),
            ("rk4_transport", kernels.rk4_transport, kernels.rk4_transport_py,
             transport_workload)):
        call_args, steps = workload()
        compiled(*call_args)  # compile before timing
        t_jit = best_of(compiled, call_args, args.repeats)
        t_py = best_of(fallback, call_args, args.repeats)
        rows.append((name, steps, t_jit, t_py))

    print(f"{'kernel':<14} {'steps':>8} {'numba':>12} {'python':>12} {'speedup':>9}")
    for name, steps, t_jit, t_py in rows:
        speedup = t_py / t_jit if t_jit > 0 else math.inf
        print(f"{name:<14} {steps:>8} {t_jit * 1e3:>10.2f}ms {t_py * 1e3:>10.2f}ms "
              f"{speedup:>8.1f}x")


if __name__ == "__main__":
    main()
