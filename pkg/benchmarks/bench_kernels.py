"""Compare the compiled and numpy kernels on the scan workloads.

Run with ``python benchmarks/bench_kernels.py [--samples N]``. Each kernel is
timed on identical inputs for both backends and the verdicts are checked for
agreement.
"""
import argparse
import time

import numpy as np

from sepprob import bloore, eigenspace, kernels
from sepprob.qmc import LdsStream


def _time(fn, repeats):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_ppt(system, beta, n_samples, grid_points, repeats):
    method = bloore.default_method(system, beta)
    dim = bloore.sample_dimension(system, beta, method)
    u = LdsStream("sobol", dim, 0).next_block(n_samples)
    W, feasible = bloore.cube_to_W(system, beta, u, method)
    W = W[feasible]
    grid = np.linspace(0.0, 1.0, grid_points) if system == "two-qubit" else \
        np.column_stack([np.linspace(0.0, 1.0, grid_points)] * 2)
    scale, src, tol = bloore.ppt_tables(system, beta, bloore.grid_diags(system, grid))
    rows = []
    outs = {}
    for backend in ("compiled", "numpy"):
        if backend == "compiled" and kernels.BACKEND != "compiled":
            continue
        t, outs[backend] = _time(lambda: kernels.ppt_flags(W, scale, src, tol, backend),
                                 repeats)
        rows.append((backend, t, len(W) * grid_points / t))
    agree = "n/a" if len(outs) < 2 else str(bool(np.array_equal(*outs.values())))
    return f"ppt {system} beta={beta}", len(W), rows, agree


def bench_spectral(m, n_unitaries, repeats):
    grid = eigenspace.EigenGrid.build(m)
    lam = np.ascontiguousarray(grid.points)
    rng = np.random.default_rng(0)
    q = eigenspace.projector_transposes(eigenspace.haar_unitary(rng, 4, n_unitaries))
    tol = np.full(len(lam), eigenspace.PSD_TOL)
    rows = []
    outs = {}
    for backend in ("compiled", "numpy"):
        if backend == "compiled" and kernels.BACKEND != "compiled":
            continue
        t, outs[backend] = _time(lambda: kernels.spectral_ppt_flags(q, lam, tol, backend),
                                 repeats)
        rows.append((backend, t, n_unitaries * len(lam) / t))
    agree = "n/a" if len(outs) < 2 else str(bool(np.array_equal(*outs.values())))
    return f"spectral m={m}", n_unitaries, rows, agree


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--samples", type=int, default=4096)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()
    print(f"default backend: {kernels.BACKEND}")
    cases = [bench_ppt("two-qubit", b, args.samples, 201, args.repeats) for b in (1, 2, 4)]
    cases.append(bench_ppt("qubit-qutrit", 1, 8 * args.samples, 21, args.repeats))
    cases.append(bench_spectral(20, max(100, args.samples // 8), args.repeats))
    print(f"{'case':28s} {'items':>7s} {'backend':>9s} {'seconds':>9s} {'tests/s':>11s} agree")
    for name, n, rows, agree in cases:
        for backend, t, rate in rows:
            print(f"{name:28s} {n:7d} {backend:>9s} {t:9.4f} {rate:11.3g} {agree}")
        if len(rows) == 2:
            print(f"{'':28s} {'':7s} {'speedup':>9s} {rows[1][1] / rows[0][1]:9.2f}")


if __name__ == "__main__":
    main()
