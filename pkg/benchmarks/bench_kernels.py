"""Timing comparison of the numba kernels against their pure-numpy twins.

Two views:

* kernel grid: ``lambda_box`` / ``support`` / ``box`` on random stars over
  a grid of (dimension, generator count), repetitions interleaved between
  backends so clock drift hits both equally, minimum wall time reported.
* end to end: the 2050-step planar flowpipe run once per backend in a
  subprocess, selected with ``UNCREACH_PURE_NUMPY``, jit warmup excluded.

Run:  python3 benchmarks/bench_kernels.py [--reps 9] [--skip-e2e]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np

from uncreach import _kernels as K

GRID = [(2, 64), (2, 512), (4, 256), (8, 256), (8, 1024), (16, 512)]
N_DIRS = 128


def make_case(rng, n, m):
    """Random interval matrix, star, and direction rows for one grid point."""
    center = rng.standard_normal((n, n))
    radius = 0.05 * rng.random((n, n))
    llo = center - radius
    lhi = center + radius
    anchor = rng.standard_normal(n)
    gens = rng.standard_normal((n, m))
    clo = -rng.random(m)
    chi = rng.random(m)
    dirs = rng.standard_normal((N_DIRS, n))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    return llo, lhi, anchor, gens, clo, chi, dirs


def time_pair(fn_a, fn_b, args_a, args_b, reps):
    """Best wall time for each callable, repetitions interleaved."""
    best_a = best_b = float("inf")
    for _ in range(reps):
        t0 = time.perf_counter()
        fn_a(*args_a)
        best_a = min(best_a, time.perf_counter() - t0)
        t0 = time.perf_counter()
        fn_b(*args_b)
        best_b = min(best_b, time.perf_counter() - t0)
    return best_a, best_b


def bench_kernels(reps):
    rng = np.random.default_rng(4242)
    pairs = [
        ("lambda_box", K.lambda_box_numpy, K.lambda_box_numba),
        ("support", K.support_numpy, K.support_numba),
        ("box", K.box_numpy, K.box_numba),
    ]
    print(f"{'kernel':<11} {'n':>3} {'m':>5} {'numpy':>10} {'numba':>10} {'speedup':>8}")
    for n, m in GRID:
        llo, lhi, anchor, gens, clo, chi, dirs = make_case(rng, n, m)
        argmap = {
            "lambda_box": (llo, lhi, anchor, gens, clo, chi),
            "support": (anchor, gens, clo, chi, dirs),
            "box": (anchor, gens, clo, chi),
        }
        for name, f_np, f_nb in pairs:
            args = argmap[name]
            if f_nb is None:
                t0 = time.perf_counter()
                for _ in range(reps):
                    f_np(*args)
                t_np = (time.perf_counter() - t0) / reps
                print(f"{name:<11} {n:>3} {m:>5} {t_np * 1e6:>8.1f}us {'-':>10} {'-':>8}")
                continue
            f_nb(*args)  # compile outside the timed region
            t_np, t_nb = time_pair(f_np, f_nb, args, args, reps)
            print(
                f"{name:<11} {n:>3} {m:>5} {t_np * 1e6:>8.1f}us "
                f"{t_nb * 1e6:>8.1f}us {t_np / t_nb:>7.2f}x"
            )


E2E_SNIPPET = """
import json, time
from importlib.resources import files
from uncreach import BACKEND, load_model, ors_reach

model = load_model(files("uncreach") / "models" / "girad1.yaml")
ors_reach(model)  # warmup: jit compile and cache fill
t0 = time.perf_counter()
res = ors_reach(model)
print(json.dumps({"backend": BACKEND, "wall": time.perf_counter() - t0,
                  "steps": len(res.boxes)}))
"""


def bench_e2e():
    rows = []
    for force in (False, True):
        env = dict(os.environ)
        env["UNCREACH_PURE_NUMPY"] = "1" if force else "0"
        out = subprocess.run(
            [sys.executable, "-c", E2E_SNIPPET],
            env=env, capture_output=True, text=True, check=True,
        )
        rows.append(json.loads(out.stdout))
    print(f"\n{'backend':<8} {'steps':>6} {'wall':>9}")
    for row in rows:
        print(f"{row['backend']:<8} {row['steps']:>6} {row['wall']:>8.3f}s")
    if rows[0]["backend"] != rows[1]["backend"]:
        print(f"end-to-end speedup: {rows[1]['wall'] / rows[0]['wall']:.2f}x")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--reps", type=int, default=9,
                        help="interleaved repetitions per grid point")
    parser.add_argument("--skip-e2e", action="store_true",
                        help="skip the subprocess flowpipe comparison")
    args = parser.parse_args()

    print(f"active backend: {K.BACKEND} (numba available: {K.HAVE_NUMBA})")
    bench_kernels(args.reps)
    if not args.skip_e2e:
        bench_e2e()


if __name__ == "__main__":
    main()
