#!/usr/bin/env python3
"""Benchmark the heat-bath sweep kernels: compiled extension vs pure Python.

Runs identical systematic sweeps on a couple of tori with both backends,
checks that the resulting states match bit for bit, and reports site
updates per second.

    python3 benchmarks/bench_sweep.py [--sweeps N]
"""

import argparse
import time

import numpy as np

from heightlab import _kernels_py as pure
from heightlab.heights import HOM, LIP, make_bc
from heightlab.sampler import chain_setup
from heightlab.torus import build_torus

try:
    from heightlab import _kernels as compiled
except ImportError:
    compiled = None


def run(impl, setup, sweeps, seed=7):
    state = setup.fmin.copy()
    start = time.perf_counter()
    for t in range(sweeps):
        rc = impl.sweep(state, setup.nbrs, setup.frozen, setup.clamp_lo,
                        setup.clamp_hi, setup.model_lip, seed, 0, t)
        assert rc == 0
    elapsed = time.perf_counter() - start
    return state, elapsed


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--sweeps", type=int, default=200)
    args = parser.parse_args()

    cases = [
        ("hom 32x32 zero", make_bc(build_torus([32, 32]), "zero"), HOM),
        ("lip 16x16 zero-one", make_bc(build_torus([16, 16]), "zero-one"), LIP),
        ("hom 2x2x4x4 one-point", make_bc(build_torus([2, 2, 4, 4]), "one-point"), HOM),
    ]
    print(f"{'case':28s} {'backend':8s} {'updates/s':>12s} {'time':>8s}")
    for name, bc, model in cases:
        setup = chain_setup(bc, model)
        n_updates = args.sweeps * int((setup.frozen == 0).sum())
        state_py, t_py = run(pure, setup, max(args.sweeps // 20, 1))
        py_rate = (n_updates / 20) / t_py
        print(f"{name:28s} {'python':8s} {py_rate:12.3e} {t_py:7.2f}s"
              f"  ({max(args.sweeps // 20, 1)} sweeps)")
        if compiled is None:
            print(f"{name:28s} {'cython':8s} {'unavailable':>12s}")
            continue
        state_c, t_c = run(compiled, setup, args.sweeps)
        c_rate = n_updates / t_c
        print(f"{name:28s} {'cython':8s} {c_rate:12.3e} {t_c:7.2f}s"
              f"  ({args.sweeps} sweeps)")
        # bit-exactness on the common prefix of sweeps
        check_py, _ = run(pure, setup, 3)
        check_c, _ = run(compiled, setup, 3)
        assert np.array_equal(check_py, check_c), "backends diverged"
        print(f"{name:28s} {'':8s} speedup x{c_rate / py_rate:,.0f}, "
              "states bit-identical")
    print("done")


if __name__ == "__main__":
    main()
