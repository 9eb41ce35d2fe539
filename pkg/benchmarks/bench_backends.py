#!/usr/bin/env python3
"""Compare the numba and numpy kernel backends on the hot paths.

Spawns one subprocess per backend (the backend is fixed at import time via
SPINKERR_BACKEND) and times the CSR matvec and the full adaptive evolution
to steady state on the reference blockade point.

Usage: python benchmarks/bench_backends.py [--repeat N]
"""

import argparse
import json
import os
import subprocess
import sys

_WORKER = r"""
import json
import time

import numpy as np

from spinkerr import _kernels, build_space, paper_derived
from spinkerr.model import liouvillian, vectorize
from spinkerr.steadystate import evolve_from_vacuum

repeat = int(__import__("sys").argv[1])
d = paper_derived(omega=30e3, delta0=-2.3e6)
space = build_space(4, 4)
lv = (liouvillian(d, space) / d.gamma).tocsr()
x = np.zeros(space.dim**2, dtype=complex)
x[0] = 1.0

# warm-up (includes JIT compilation on the numba path)
_kernels.csr_matvec(lv, x)
evolve_from_vacuum(d, space, 2.0, rtol=1e-9)

t0 = time.perf_counter()
n_mv = 20000
for _ in range(n_mv):
    y = _kernels.csr_matvec(lv, x)
matvec_us = (time.perf_counter() - t0) / n_mv * 1e6

best = float("inf")
for _ in range(repeat):
    t0 = time.perf_counter()
    evolve_from_vacuum(d, space, 40.0, rtol=1e-10, atol=1e-15)
    best = min(best, time.perf_counter() - t0)

print(json.dumps({"backend": _kernels.backend_name(),
                  "matvec_us": matvec_us, "evolve_s": best}))
"""


def run_backend(backend, repeat):
    env = dict(os.environ, SPINKERR_BACKEND=backend)
    out = subprocess.run([sys.executable, "-c", _WORKER, str(repeat)],
                         env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout.strip().split("\n")[-1])


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3,
                        help="evolution repetitions per backend (best-of)")
    args = parser.parse_args()

    rows = []
    for backend in ("numpy", "numba"):
        try:
            rows.append(run_backend(backend, args.repeat))
        except subprocess.CalledProcessError as exc:
            print(f"{backend}: failed\n{exc.stderr}", file=sys.stderr)
    print(f"{'backend':<8} {'matvec [us]':>12} {'evolve tau=40 [s]':>18}")
    for row in rows:
        print(f"{row['backend']:<8} {row['matvec_us']:>12.2f} "
              f"{row['evolve_s']:>18.3f}")
    if len(rows) == 2:
        print(f"\nspeedup (numpy/numba): "
              f"matvec {rows[0]['matvec_us'] / rows[1]['matvec_us']:.1f}x, "
              f"evolve {rows[0]['evolve_s'] / rows[1]['evolve_s']:.1f}x")


if __name__ == "__main__":
    main()
