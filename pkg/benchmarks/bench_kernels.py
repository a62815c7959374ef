"""Compare the compiled and numpy kernel backends.

Times one full exponential-integrator step (two FFT pairs plus the per-mode
updates) on the 800-wide interaction domain, the per-mode updates alone, and
the dense RK4 reference on a 32-mode grid.

    python benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from boussinesq_dei import kernels, stepper
from boussinesq_dei.grid import TorusGrid
from boussinesq_dei.oracle import dft_matrices
from boussinesq_dei.solutions import initial_pair, initial_single
from boussinesq_dei.stepper import WaveState, build_tables


def use_backend(name):
    impl = kernels.load_backend(name)
    for fn in ("advance_position", "advance_velocity", "rk4_reference"):
        setattr(kernels, fn, getattr(impl, fn))
    return impl


def bench(name, repeat):
    impl = use_backend(name)
    grid = TorusGrid(-400.0, 400.0, 6400)
    s0 = WaveState.from_initial(initial_pair(grid, 0.37, 0.37, -50.0, 50.0))
    tables = build_tables(grid, 1e-3)
    nsteps = 200
    t_step = min(timeit.repeat(lambda: stepper.evolve(s0, 1e-3, nsteps, tables=tables), number=1, repeat=repeat)) / nsteps

    z, dz = s0.zhat.coeffs, s0.dzhat.coeffs
    rho = stepper.nonlinear_spectrum(s0.zhat, stepper.QUADRATIC).coeffs
    out = np.empty_like(z)

    def updates():
        impl.advance_position(z, dz, rho, tables.cos_t, tables.sinc_t, tables.pz, tables.tau, out)
        impl.advance_velocity(z, dz, rho, rho, tables.dz_t, tables.cos_t, tables.qc, tables.qn, out)

    t_upd = min(timeit.repeat(updates, number=1000, repeat=repeat)) / 1000

    small = TorusGrid(-60.0, 60.0, 32)
    r0 = WaveState.from_initial(initial_single(small, 0.375))
    fwd, inv = dft_matrices(small)
    mu2, th2 = small.mu**2, small.theta**2

    def rk4():
        zz, dd = r0.zhat.coeffs.copy(), r0.dzhat.coeffs.copy()
        impl.rk4_reference(zz, dd, mu2, th2, fwd, inv, 1e-5, 2000, 2)

    t_rk4 = min(timeit.repeat(rk4, number=1, repeat=repeat)) / 2000
    return t_step, t_upd, t_rk4


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    names = kernels.available_backends()
    print(f"default backend: {kernels.BACKEND}; available: {', '.join(names)}")
    print(f"{'backend':<8} {'step M=6400':>14} {'updates M=6400':>16} {'RK4 step M=32':>15}")
    results = {}
    for name in names:
        results[name] = bench(name, args.repeat)
        t_step, t_upd, t_rk4 = results[name]
        print(f"{name:<8} {t_step * 1e6:11.1f} us {t_upd * 1e6:13.1f} us {t_rk4 * 1e6:12.2f} us")
    if len(results) == 2:
        c, p = results["cython"], results["numpy"]
        print("speed-up  " + "  ".join(f"{pp / cc:.2f}x" for cc, pp in zip(c, p)))
    use_backend(kernels.BACKEND)


if __name__ == "__main__":
    main()
