"""Compare the numba kernels with the pure-numpy fallback.

    python benchmarks/bench_kernels.py [--repeat N]

Kernels are timed directly on representative sizes, then the full
pipeline is timed on the bundled eight-point data set under each backend
(in a subprocess, since the backend is fixed at import).
"""

import argparse
import os
import subprocess
import sys
import timeit
from pathlib import Path

import numpy as np

from approxbm import kernels
from approxbm._accel import HAVE_NUMBA

ROOT = Path(__file__).resolve().parents[1]

PIPELINE = """
import timeit
from approxbm.cli import RunConfig, run_pipeline, parse_points
P = parse_points({path!r}, 0.1)
cfg = RunConfig(points=P, s0=0.1)
run_pipeline(cfg)
print(min(timeit.repeat(lambda: run_pipeline(cfg), number=1, repeat={repeat})))
"""


def _time(fn, repeat):
    fn()  # warm-up (triggers compilation for numba)
    number = 200
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def kernel_table(repeat):
    rng = np.random.default_rng(0)
    rows = []
    for m, k in [(3, 3), (8, 8), (20, 12)]:
        pts = rng.uniform(-3, 3, size=(m, 2))
        E = rng.integers(0, 5, size=(k, 2)).astype(np.int64)
        A = rng.normal(size=(m, k))
        b = rng.normal(size=m)
        cases = {
            "monomial_values": (kernels._numpy_monomial_values, kernels._numba_monomial_values, (pts, E)),
            "householder_lstsq": (kernels._numpy_householder_lstsq, kernels._numba_householder_lstsq,
                                  (A, b, 1e-12)),
            "jacobi_singular_values": (kernels._numpy_jacobi_singular_values,
                                       kernels._numba_jacobi_singular_values, (A,)),
        }
        for name, (fnp, fnb, args) in cases.items():
            t_np = _time(lambda: fnp(*args), repeat)
            t_nb = _time(lambda: fnb(*args), repeat) if HAVE_NUMBA else float("nan")
            rows.append((name, f"{m}x{k}", t_np, t_nb))
    return rows


def pipeline_time(disable, repeat):
    env = dict(os.environ, APPROXBM_DISABLE_NUMBA="1" if disable else "0")
    code = PIPELINE.format(path=str(ROOT / "data" / "eight_symmetric.csv"), repeat=repeat)
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    return float(out.stdout.strip())


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    print(f"{'kernel':<24}{'size':>8}{'numpy (us)':>14}{'numba (us)':>14}{'speedup':>10}")
    for name, size, t_np, t_nb in kernel_table(args.repeat):
        print(f"{name:<24}{size:>8}{t_np * 1e6:>14.1f}{t_nb * 1e6:>14.1f}{t_np / t_nb:>9.1f}x")
    print()
    t_np = pipeline_time(True, args.repeat)
    line = f"full pipeline, eight points: numpy {t_np * 1e3:.2f} ms"
    if HAVE_NUMBA:
        t_nb = pipeline_time(False, args.repeat)
        line += f", numba {t_nb * 1e3:.2f} ms ({t_np / t_nb:.1f}x)"
    print(line)


if __name__ == "__main__":
    main()
