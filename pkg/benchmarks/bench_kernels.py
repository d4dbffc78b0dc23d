#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python reference.

Two workloads, both dominated by per-point calls into the 4x4 closed-form
layer (where numpy dispatch overhead would dominate the arithmetic):

* scan: the phase-diagram grid fill behind ``ncweyl scan``
* sigma-chain: per-tuple structure matrix -> coefficients -> pushforward ->
  canonical pattern match, the workload of the closed-form identity sweeps

Run after building the extension:  python3 benchmarks/bench_kernels.py
"""

import argparse
import time

import numpy as np

from ncweyl import _kernels_py as python_kernels
from ncweyl.darboux import assemble_positive

try:
    from ncweyl import _kernels as cython_kernels
except ImportError:
    cython_kernels = None


def bench_scan(kern, cells):
    side = int(np.sqrt(cells))
    thetas = np.ascontiguousarray(np.linspace(0.1, 4.0, side))
    gammas = np.ascontiguousarray(np.linspace(-4.0, 4.0, side))
    start = time.perf_counter()
    kern.scan_grid(thetas, gammas, 1.0, 1e-12, 1e-8)
    elapsed = time.perf_counter() - start
    return elapsed, side * side


def bench_sigma_chain(kern, count):
    rng = np.random.default_rng(7)
    tuples = []
    while len(tuples) < count:
        theta = rng.uniform(0.1, 4.0)
        gamma = rng.uniform(0.1, 4.0)
        hbar = rng.uniform(0.1, 4.0)
        if hbar * hbar - gamma * theta > 1e-3:
            tuples.append((theta, gamma, hbar))
    start = time.perf_counter()
    for theta, gamma, hbar in tuples:
        omega = kern.structure_omega(theta, gamma, hbar)
        a_plus, _, b_plus, _ = kern.positive_coeffs(theta, gamma, hbar)
        m = assemble_positive(a_plus, b_plus)
        prime = kern.sandwich4(m, omega)
        kern.canonical_sigma(prime, 1e-10)
    elapsed = time.perf_counter() - start
    return elapsed, count


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--cells", type=int, default=250_000,
                        help="grid cells for the scan workload")
    parser.add_argument("--tuples", type=int, default=50_000,
                        help="parameter tuples for the sigma-chain workload")
    args = parser.parse_args()

    backends = [("python", python_kernels)]
    if cython_kernels is not None:
        backends.append(("cython", cython_kernels))
    else:
        print("compiled extension not importable; benchmarking the fallback only")

    workloads = [
        ("scan", bench_scan, args.cells),
        ("sigma-chain", bench_sigma_chain, args.tuples),
    ]
    results = {}
    for wname, fn, size in workloads:
        for bname, kern in backends:
            elapsed, n = fn(kern, size)
            results[(wname, bname)] = (elapsed, n)

    print(f"{'workload':<14}{'backend':<10}{'items':>10}{'time':>10}{'rate':>16}")
    for wname, _, _ in workloads:
        for bname, _ in backends:
            elapsed, n = results[(wname, bname)]
            print(f"{wname:<14}{bname:<10}{n:>10}{elapsed:>9.3f}s{n / elapsed:>13.0f}/s")
        if len(backends) == 2:
            speedup = results[(wname, "python")][0] / results[(wname, "cython")][0]
            print(f"{'':<14}cython speedup: {speedup:.1f}x")


if __name__ == "__main__":
    main()
