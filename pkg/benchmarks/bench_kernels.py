"""Time the compiled rectangle kernel against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--sizes 5 6 7 8] [--repeat 3]

Both kernels see the same state arrays; the script also checks that they
return identical rectangles before reporting any timing.
"""

import argparse
import time

import numpy as np

from gridfloer import _pykernel
from gridfloer.braid import parse_braid
from gridfloer.complex import grid_complex
from gridfloer.grid import from_braid, stabilization_move

try:
    from gridfloer import _kernels
except ImportError:
    _kernels = None


def grid_of_size(k):
    G = from_braid(parse_braid("2: 1 1 1"))
    while G.size < k:
        G = stabilization_move(G, (G.w_col[0], 0), "NE")
    return G


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[5, 6, 7, 8])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if _kernels is None:
        print("compiled kernel not built; only the Python timings are shown")
    print(f"{'k':>3} {'states':>8} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for k in args.sizes:
        G = grid_of_size(k)
        states = grid_complex(G).perms
        wcol, zcol = list(G.w_col), list(G.z_col)
        # pure Python is slow; time it on a slice and scale up
        n_py = min(len(states), 5040)
        py_t, py_out = best_of(lambda: _pykernel.rectangles(states[:n_py], wcol, zcol, 0, 0), 1)
        py_t *= len(states) / n_py
        if _kernels is None:
            print(f"{k:>3} {len(states):>8} {py_t:>10.3f} {'-':>10} {'-':>8}")
            continue
        cy_t, _ = best_of(lambda: _kernels.rectangles(states, wcol, zcol, 0, 0), args.repeat)
        cy_small = _kernels.rectangles(states[:n_py], wcol, zcol, 0, 0)
        if not all(np.array_equal(np.asarray(a), np.asarray(b)) for a, b in zip(py_out, cy_small)):
            raise SystemExit(f"kernels disagree at k={k}")
        print(f"{k:>3} {len(states):>8} {py_t:>10.3f} {cy_t:>10.4f} {py_t / cy_t:>7.0f}x")


if __name__ == "__main__":
    main()
