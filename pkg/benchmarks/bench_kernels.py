#!/usr/bin/env python3
"""Benchmark the superposition-quadrature kernel: compiled vs NumPy.

Times the raw phase-sum kernel on a direct-path-sized workload and the
full spectral oracle run through each backend, and checks that the
backends agree. Run from the repo root:

    python3 benchmarks/bench_kernels.py [--grid 64] [--repeat 3]
"""

import argparse
import math
import time

import numpy as np

import spdcsim as s


def kernel_workload(n_grid, n_rho, n_z, n_t, seed=0):
    rng = np.random.default_rng(seed)
    pump = np.exp(1j * rng.uniform(0, 2 * math.pi, size=(n_rho, n_z, n_t)))
    rho = np.linspace(-1e-4, 1e-4, n_rho)
    z = np.linspace(-5e-5, 5e-5, n_z)
    t = np.linspace(-3e-11, 3e-11, n_t)
    n_out = n_grid * n_grid
    q_sum = rng.uniform(-1e5, 1e5, n_out)
    kz_sum = rng.uniform(2.5e7, 2.6e7, n_out)
    w_sum = rng.uniform(4.7e15, 4.9e15, n_out)
    return pump, rho, z, t, q_sum, kz_sum, w_sum


def time_call(fn, repeat):
    best = math.inf
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - start)
    return best, result


def bench_kernel(args):
    work = kernel_workload(args.grid, args.rho_nodes, args.z_nodes, args.t_nodes)
    n_ops = args.grid**2 * args.rho_nodes * args.z_nodes * args.t_nodes
    print(f"kernel workload: {args.grid}x{args.grid} outputs, "
          f"{args.rho_nodes}x{args.z_nodes}x{args.t_nodes} nodes "
          f"({n_ops / 1e6:.0f}M multiply-adds)")
    results = {}
    for name in s.available_backends():
        for threads in (1, args.threads):
            best, out = time_call(
                lambda: s.scatter_phase_sum(*work, threads=threads, backend=name),
                args.repeat)
            results[(name, threads)] = out
            print(f"  {name:9s} threads={threads}: {best * 1e3:9.1f} ms  "
                  f"({n_ops / best / 1e6:8.1f} M node-sums/s)")
    ref = results[(sorted(results)[0])]
    for key, out in results.items():
        err = np.max(np.abs(out - ref)) / np.max(np.abs(ref))
        assert err < 1e-10, f"backend mismatch for {key}: {err}"
    print("  backends agree to < 1e-10 relative")


def bench_direct_path(args):
    idx = s.ConstantIndex(1.6)
    pump = s.PlaneWavePump(omega0=4.8e15, index_model=idx)
    crystal = s.CrystalConfig(L=1e-4, index_pump=idx, index_signal=idx,
                              index_idler=idx)
    step = 1e11
    axes = s.spectral_axes(args.grid, 2.4e15, step)
    windows = s.ScatterWindows(T=2 * math.pi / step, W=1e-5)
    quad = s.DirectQuadrature(n_time=10 * args.grid, n_z=16, n_rho=16)
    print(f"direct spectral run: {args.grid}x{args.grid} grid, "
          f"n_time={quad.n_time}")
    for name in s.available_backends():
        best, _ = time_call(
            lambda: s.direct_wavefunction(pump, crystal, windows, axes, quad,
                                          threads=args.threads,
                                          kernel_backend=name),
            args.repeat)
        print(f"  {name:9s} threads={args.threads}: {best:8.2f} s")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--grid", type=int, default=64)
    parser.add_argument("--t-nodes", type=int, default=512)
    parser.add_argument("--z-nodes", type=int, default=16)
    parser.add_argument("--rho-nodes", type=int, default=16)
    parser.add_argument("--threads", type=int, default=4)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    print(f"available backends: {', '.join(s.available_backends())} "
          f"(default: {s.backend_name()})")
    bench_kernel(args)
    bench_direct_path(args)


if __name__ == "__main__":
    main()
