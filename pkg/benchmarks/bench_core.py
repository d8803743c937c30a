#!/usr/bin/env python3
"""Benchmark the compiled oscillatory-sum kernel against the NumPy fallback.

Runs both backends on representative half-period summation workloads (the
hot loop behind every large-t norm evaluation) and on a few end-to-end
norm computations, reporting timings and agreement.

Usage: python benchmarks/bench_core.py
"""

import math
import time

import numpy as np

from platelab._core import _oscsum_py

try:
    from platelab._core import _oscsum_cy
except ImportError:
    _oscsum_cy = None

GLX, GLW = np.polynomial.legendre.leggauss(16)

KERNEL_CASES = [
    ("plate n=1, t=1e4", ([4 * math.pi], [0.0], [1.0], -4.0, 1e4, 2.0, 2, False,
                          (8 * math.pi / 1e4) ** 0.5, 1e-10)),
    ("plate n=4, t=1e6", ([32 * math.pi ** 6], [0.0], [1.0], -1.0, 1e6, 2.0, 2,
                          False, (8 * math.pi / 1e6) ** 0.5, 1e-5)),
    ("sigma=1, n=2, t=1e6", ([4 * math.pi ** 3], [0.0], [1.0], -1.0, 1e6, 1.0, 2,
                             False, 8 * math.pi / 1e6, 1e-6)),
    ("sigma=3 tail, t=1e5", ([1.0], [1.0], [1.0], 0.0, 1e5, 3.0, 2, False,
                             (8 * math.pi / 1e5) ** (1 / 3), 1e-12)),
]


def run_kernel(fn, case, repeats=3):
    coeffs, powers, widths, p, t, sigma, m, use_sin, r_start, tau = case
    args = (np.asarray(coeffs), np.asarray(powers), np.asarray(widths),
            p, t, sigma, m, use_sin, r_start, tau, 10 ** 8, GLX, GLW)
    best = math.inf
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return out, best


def bench_kernels():
    print("== half-period summation kernel ==")
    header = f"{'case':24s} {'panels':>10s} {'numpy':>10s} {'compiled':>10s} {'speedup':>8s}"
    print(header)
    for name, case in KERNEL_CASES:
        out_py, t_py = run_kernel(_oscsum_py.osc_trig_sum, case)
        if _oscsum_cy is None:
            print(f"{name:24s} {out_py[2]:>10d} {t_py:>9.3f}s {'-':>10s} {'-':>8s}")
            continue
        out_cy, t_cy = run_kernel(_oscsum_cy.osc_trig_sum, case)
        # cancelling sums reorder differently across backends, hence the
        # absolute floor on the agreement check
        diff = abs(out_cy[0] - out_py[0])
        assert out_cy[2] == out_py[2], "panel counts diverged"
        assert diff < 1e-12 + 1e-10 * abs(out_py[0]), f"backends disagree: {diff:.2e}"
        print(f"{name:24s} {out_py[2]:>10d} {t_py:>9.3f}s {t_cy:>9.3f}s "
              f"{t_py / t_cy:>7.2f}x")


NORM_SNIPPET = """
import json, time
import platelab
from platelab.model import Gaussian, Problem, ZERO, build_data
from platelab.analysis import solution_l2_sq
jobs = [(1, 1e4), (1, 1e6), (4, 1e5), (4, 1e6)]
out = []
for n, t in jobs:
    prob = Problem(n=n, sigma=2.0, data0=ZERO,
                   data1=build_data([(1.0, Gaussian(0.5))], n))
    solution_l2_sq(prob, t)            # warm caches
    t0 = time.perf_counter()
    value = solution_l2_sq(prob, t)
    out.append([n, t, value, time.perf_counter() - t0, platelab.core_backend])
print(json.dumps(out))
"""


def bench_norms():
    # fresh interpreter per backend: the kernel binding is decided at import
    import json
    import os
    import subprocess
    import sys

    print("\n== end-to-end squared-norm evaluations ==")

    def timed_run(pure):
        env = dict(os.environ)
        env.pop("PLATELAB_PURE_PYTHON", None)
        if pure:
            env["PLATELAB_PURE_PYTHON"] = "1"
        proc = subprocess.run([sys.executable, "-c", NORM_SNIPPET], env=env,
                              capture_output=True, text=True, check=True)
        return json.loads(proc.stdout)

    fallback = timed_run(pure=True)
    compiled = timed_run(pure=False) if _oscsum_cy is not None else None

    print(f"{'case':16s} {'numpy':>10s} {'compiled':>10s} {'speedup':>8s}")
    for i, (n, t, value_py, t_py, backend) in enumerate(fallback):
        assert backend == "python"
        label = f"n={n}, t={t:g}"
        if compiled is None:
            print(f"{label:16s} {t_py:>9.3f}s {'-':>10s} {'-':>8s}")
            continue
        _, _, value_cy, t_cy, backend_cy = compiled[i]
        assert backend_cy == "compiled"
        rel = abs(value_cy - value_py) / value_py
        assert rel < 1e-9, f"backends disagree on {label}: rel {rel:.2e}"
        print(f"{label:16s} {t_py:>9.3f}s {t_cy:>9.3f}s {t_py / t_cy:>7.2f}x")


if __name__ == "__main__":
    if _oscsum_cy is None:
        print("compiled core not available; timing the fallback only\n")
    bench_kernels()
    bench_norms()
