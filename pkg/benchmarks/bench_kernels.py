"""Compare the compiled and numpy time-stepping kernels.

Usage::

    python benchmarks/bench_kernels.py [--sizes 200 400 800] [--repeat 3]

For each grid size and kernel shape, runs the full normalized iteration to
convergence with both backends and reports the best wall time of
``--repeat`` runs, the iteration count and the eigenvalue gap.
"""
import argparse
import time
from dataclasses import replace

import numpy as np

from growfrag import (IterationConfig, KernelModel, ProblemSpec, RationalPower,
                      build_discrete_problem, build_grid)
from growfrag.kernels import BACKENDS

SPEC = ProblemSpec(RationalPower(8.0, 0.2, 1.0, 2.0, 4.2), RationalPower(1.0, 3.0, 15.0, 1.0, 4.5))


def run(backend, problem, config):
    dt = config.time_step(problem)
    kmat = None if problem.column_constant else problem.kernel_mat
    u0 = config.initial_profile(problem.grid)
    start = time.perf_counter()
    u, it, _ = backend.iterate(problem.tau_vec, problem.beta_vec, problem.kernel_col, kmat,
                               problem.dx, dt, u0, config.epsilon, config.max_iters,
                               config.scheme == "implicit_upwind", config.shifted)
    return time.perf_counter() - start, it, float(problem.dx * np.dot(problem.beta_vec, u))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[200, 400, 800, 1600])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--scheme", default="implicit_upwind",
                        choices=("implicit_upwind", "semi_implicit"))
    args = parser.parse_args(argv)
    if "cython" not in BACKENDS:
        print("compiled extension not built; only the numpy backend is available")
    config = IterationConfig(scheme=args.scheme)
    kernels = {"uniform": KernelModel.uniform(), "beta(2)": KernelModel.symmetric_beta(2.0)}
    print(f"{'kernel':>8} {'N':>5} {'backend':>7} {'seconds':>9} {'iters':>6} {'speedup':>8} {'|dlambda|':>10}")
    for kname, kernel in kernels.items():
        for n in args.sizes:
            problem = build_discrete_problem(replace(SPEC, kernel=kernel), build_grid(10.0, n))
            results = {}
            for name in sorted(BACKENDS):
                runs = [run(BACKENDS[name], problem, config) for _ in range(args.repeat)]
                results[name] = (min(r[0] for r in runs), runs[0][1], runs[0][2])
            base = results["python"]
            for name, (secs, it, lam) in results.items():
                print(f"{kname:>8} {n:>5} {name:>7} {secs:9.4f} {it:6d} {base[0] / secs:8.1f} "
                      f"{abs(lam - base[2]):10.2e}")


if __name__ == "__main__":
    main()
