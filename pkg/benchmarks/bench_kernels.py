"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--terms 18000] [--repeat 200]

Also times one end-to-end zero solve per backend by re-importing the
package in a subprocess with SPECFLOW_PURE_PYTHON set.
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from specflow import kernels

SOLVE_SNIPPET = (
    "import time; from specflow import LFunctionSpec, solve_range, kernels;"
    "t=time.perf_counter(); solve_range(LFunctionSpec.zeta(), 5000, 5049);"
    "print(kernels.BACKEND, time.perf_counter()-t)"
)


def bench(fn, args, repeat):
    fn(*args)
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--terms", type=int, default=18000)
    ap.add_argument("--repeat", type=int, default=200)
    ap.add_argument("--no-solve", action="store_true", help="skip the end-to-end solve timing")
    args = ap.parse_args()

    n = args.terms
    logn = np.log(np.arange(1, n + 1, dtype=float))
    rng = np.random.default_rng(0)
    cre = rng.standard_normal(n)
    cim = rng.standard_normal(n)
    t = 0.77 * n
    pr, pi = kernels.python_phase_table(logn, cre, cim, t)

    cases = {
        "dirichlet_sum": (logn, cre, cim, 0.5, t),
        "dirichlet_sum_real": (logn, cre, 0.5, t),
        "phase_table": (logn, cre, cim, t),
        "phased_sum": (logn, pr, pi, 0.5),
    }
    print(f"backend in use: {kernels.BACKEND}; {n} terms; best of {args.repeat}")
    print(f"{'kernel':<20}{'python [ms]':>14}{'compiled [ms]':>16}{'speedup':>10}")
    for name, a in cases.items():
        py = bench(getattr(kernels, "python_" + name), a, args.repeat)
        comp_fn = getattr(kernels, "compiled_" + name)
        if comp_fn is None:
            print(f"{name:<20}{py * 1e3:>14.3f}{'n/a':>16}{'':>10}")
            continue
        comp = bench(comp_fn, a, args.repeat)
        print(f"{name:<20}{py * 1e3:>14.3f}{comp * 1e3:>16.3f}{py / comp:>10.2f}")

    if not args.no_solve:
        print("\nsolve_range(zeta, 5000..5049):")
        for flag in ("", "1"):
            env = dict(os.environ, SPECFLOW_PURE_PYTHON=flag)
            out = subprocess.run([sys.executable, "-c", SOLVE_SNIPPET], env=env, capture_output=True, text=True)
            label, secs = out.stdout.split()
            print(f"  {label:<10}{float(secs):8.3f} s")


if __name__ == "__main__":
    main()
