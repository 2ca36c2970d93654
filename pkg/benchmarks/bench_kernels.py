"""Compare the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--sizes 8,32,128] [--repeat 5]

For each size N the script times one energy+gradient evaluation and one
fixed-length descent run on random unit vectors in R^3, checks that both
backends agree, and prints a table of median timings and speedups.
"""
from __future__ import annotations

import argparse
import statistics
import sys
import timeit

import numpy as np

from framepot import kernels


def _time(fn, repeat: int, number: int) -> float:
    return statistics.median(timeit.repeat(fn, repeat=repeat, number=number)) / number


def run(sizes, dim: int, p: float, repeat: int, iters: int, seed: int) -> list[dict]:
    if kernels.compiled is None:
        raise SystemExit("compiled backend is not built; run `pip install -e . --no-build-isolation` first")
    rng = np.random.default_rng(seed)
    rows = []
    for n in sizes:
        x = rng.standard_normal((n, dim))
        x /= np.linalg.norm(x, axis=1)[:, None]
        row = {"n": n}
        e_c, g_c = kernels.compiled.energy_grad(x, p, 0.0, 1e-12, 1e8)
        e_p, g_p = kernels.pure.energy_grad(x, p, 0.0, 1e-12, 1e8)
        row["max_abs_diff"] = max(abs(e_c - e_p) / max(1.0, abs(e_p)), float(np.max(np.abs(g_c - g_p))))
        number = max(1, 20000 // (n * n))
        for name, mod in (("compiled", kernels.compiled), ("python", kernels.pure)):
            row[f"grad_{name}"] = _time(lambda: mod.energy_grad(x, p, 0.0, 1e-12, 1e8), repeat, number)
            row[f"descend_{name}"] = _time(
                lambda: mod.descend(x, p, 0.0, iters, 0.1, 0.5, 1e-4, 0.0, 1e-12, 1e8, False), repeat, 1
            )
        rows.append(row)
    return rows


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="8,32,128")
    ap.add_argument("--dim", type=int, default=3)
    ap.add_argument("--p", type=float, default=2.5)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--iters", type=int, default=200, help="descent iterations per timed run")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    sizes = [int(s) for s in args.sizes.split(",")]

    rows = run(sizes, args.dim, args.p, args.repeat, args.iters, args.seed)
    print(f"p={args.p} d={args.dim}  (median seconds per call)")
    print(f"{'N':>5} {'grad C':>11} {'grad py':>11} {'x':>6} {'descend C':>11} {'descend py':>11} {'x':>6} {'agree':>9}")
    for r in rows:
        print(
            f"{r['n']:>5} {r['grad_compiled']:>11.3e} {r['grad_python']:>11.3e} "
            f"{r['grad_python'] / r['grad_compiled']:>6.1f} {r['descend_compiled']:>11.3e} "
            f"{r['descend_python']:>11.3e} {r['descend_python'] / r['descend_compiled']:>6.1f} "
            f"{r['max_abs_diff']:>9.1e}"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
