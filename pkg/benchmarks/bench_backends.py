#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallbacks.

Times the individual hot kernels on synthetic fields and a short
end-to-end dam-break run on each backend.  Run from the repo root:

    python3 benchmarks/bench_backends.py --size 64 --repeats 200
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from oilleak.cfd import kernels_numpy as knp

try:
    from oilleak.cfd import kernels_numba as knb
except ImportError:
    knb = None


def make_fields(n: int, rng):
    ny = nx = n
    return dict(
        u_pad=rng.normal(0, 1, (ny + 2, nx + 3)),
        v_pad=rng.normal(0, 1, (ny + 3, nx + 2)),
        p_pad=rng.normal(1e5, 100, (ny + 2, nx + 2)),
        mu_pad=rng.uniform(1e-5, 0.1, (ny + 2, nx + 2)),
        rho_pad=rng.uniform(1, 1000, (ny + 2, nx + 2)),
        su=np.zeros((ny, nx + 1)),
        sv=np.zeros((ny + 1, nx)),
        u_act=np.ones((ny, nx + 1), dtype=np.int8),
        v_act=np.ones((ny + 1, nx), dtype=np.int8),
        u=rng.normal(0, 1, (ny, nx + 1)),
        v=rng.normal(0, 1, (ny + 1, nx)),
        alpha_pad=rng.uniform(0, 1, (ny + 2, nx + 2)),
        rhs=rng.normal(0, 1, (ny, nx)),
        a=rng.uniform(0.5, 1.0, (ny, nx)),
        q_pad=np.zeros((ny + 2, nx + 2)),
        t_pad=rng.normal(0, 1, (ny + 2, nx + 2)),
        diff_pad=rng.uniform(0, 1e-3, (ny + 2, nx + 2)),
        rho=rng.uniform(1, 1000, (ny, nx)),
        s_t=np.zeros((ny, nx)),
    )


def kernel_calls(mod, f, dt, dx, dy):
    c_c = -(f["a"] * 4)
    return {
        "predict_u": lambda: mod.predict_u(
            f["u_pad"], f["v_pad"], f["p_pad"], f["mu_pad"], f["rho_pad"],
            f["su"], f["u_act"], dt, dx, dy, 0.0),
        "predict_v": lambda: mod.predict_v(
            f["u_pad"], f["v_pad"], f["p_pad"], f["mu_pad"], f["rho_pad"],
            f["sv"], f["v_act"], dt, dx, dy, -9.81),
        "sor_sweep_pair": lambda: (
            mod.sor_sweep(f["q_pad"], f["rhs"], f["a"], f["a"], f["a"],
                          f["a"], c_c, 1.7, 0),
            mod.sor_sweep(f["q_pad"], f["rhs"], f["a"], f["a"], f["a"],
                          f["a"], c_c, 1.7, 1)),
        "residual": lambda: mod.poisson_residual(
            f["q_pad"], f["rhs"], f["a"], f["a"], f["a"], f["a"], c_c),
        "vof_update": lambda: mod.vof_update(
            f["alpha_pad"], f["u"], f["v"], dt, dx, dy),
        "scalar_update": lambda: mod.scalar_update(
            f["t_pad"], f["diff_pad"], f["rho"], f["s_t"], f["u"], f["v"],
            dt, dx, dy),
        "divergence": lambda: mod.divergence(f["u"], f["v"], dx, dy),
    }


def time_call(fn, repeats: int) -> float:
    fn()  # warm-up (also triggers JIT compilation)
    t0 = time.perf_counter()
    for _ in range(repeats):
        fn()
    return (time.perf_counter() - t0) / repeats


def bench_kernels(n: int, repeats: int) -> None:
    rng = np.random.default_rng(1)
    f = make_fields(n, rng)
    dt, dx, dy = 1e-3, 1.0 / n, 1.0 / n
    numpy_calls = kernel_calls(knp, f, dt, dx, dy)
    numba_calls = kernel_calls(knb, f, dt, dx, dy) if knb else {}

    print(f"\nkernel timings, {n}x{n} grid, {repeats} repeats "
          f"(microseconds per call)")
    header = f"{'kernel':<16} {'numpy':>10} {'numba':>10} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for name, fn in numpy_calls.items():
        t_np = time_call(fn, repeats) * 1e6
        if knb:
            t_nb = time_call(numba_calls[name], repeats) * 1e6
            print(f"{name:<16} {t_np:>10.1f} {t_nb:>10.1f} "
                  f"{t_np / t_nb:>8.1f}x")
        else:
            print(f"{name:<16} {t_np:>10.1f} {'n/a':>10} {'':>9}")


def bench_end_to_end(n: int, steps: int) -> None:
    import importlib
    import os

    from oilleak.cfd import backend as backend_mod

    results = {}
    for choice in ("numpy", "numba") if knb else ("numpy",):
        os.environ["OILLEAK_BACKEND"] = choice
        importlib.reload(backend_mod)
        import oilleak.cfd.solver as solver_mod
        importlib.reload(solver_mod)
        from oilleak.cfd.grid import Grid2D
        from oilleak.cfd.state import (FluidProps, PhaseProps,
                                       SolverOptions, make_state)

        grid = Grid2D(nx=n, ny=n, dx=1.0 / n, dy=1.0 / n)
        alpha = np.zeros((n, n))
        alpha[:n // 2, :n // 3] = 1.0
        st = make_state(grid,
                        FluidProps(oil=PhaseProps(900.0, 0.05),
                                   ambient=PhaseProps(1.2, 1.8e-5)),
                        alpha=alpha, pressure_reference=101325.0,
                        options=SolverOptions())
        solver_mod.step(st, solver_mod.stable_dt(st, 0.45))  # JIT warm-up
        t0 = time.perf_counter()
        for _ in range(steps):
            solver_mod.step(st, solver_mod.stable_dt(st, 0.45))
        results[choice] = time.perf_counter() - t0
        print(f"dam break {n}x{n}, {steps} steps, {choice:>6}: "
              f"{results[choice]:.2f} s "
              f"({results[choice] / steps * 1e3:.2f} ms/step)")
    if len(results) == 2:
        print(f"end-to-end speedup: "
              f"{results['numpy'] / results['numba']:.1f}x")
    os.environ.pop("OILLEAK_BACKEND", None)
    importlib.reload(backend_mod)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--size", type=int, default=64)
    parser.add_argument("--repeats", type=int, default=200)
    parser.add_argument("--steps", type=int, default=100,
                        help="end-to-end dam-break steps")
    args = parser.parse_args()

    if knb is None:
        print("numba not importable: timing the numpy path only")
    bench_kernels(args.size, args.repeats)
    bench_end_to_end(args.size, args.steps)


if __name__ == "__main__":
    main()
