"""Compare the compiled kernels with the pure-Python reference.

    python benchmarks/bench_kernels.py [--repeat 3]

Each case runs the same inputs through both backends, checks that the
outputs agree and prints the best-of-``repeat`` wall time and the speedup.
"""

import argparse
import time

import numpy as np

from gueminors import _kernels_py
from gueminors.sampling import RngStream, brownian_increments, sample_gue_batch

try:
    from gueminors import _kernels
except ImportError:
    _kernels = None


def best_time(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def cases():
    g = RngStream(0).generator()
    h = sample_gue_batch(6, 2000, g)
    incr = brownian_increments(20, 1024, 3, g)
    words = g.integers(1, 4, size=(4, 20_000))
    arr = g.geometric(0.5, size=(20, 200, 4)) - 1
    return [
        ("eigvalsh 2000 x (6x6)", "eigvalsh_batch", (h,)),
        ("minor spectra 2000 x (6x6)", "minor_spectra_batch", (h,)),
        ("grid DP l=2 k=3, 20 x 1024 steps", "lpp_batch", (incr, 2, 3, "grid")),
        ("lattice DP l=2 k=3, 20 x 1024", "lpp_batch", (incr, 2, 3, "lattice")),
        ("RSK word shapes 4 x 2e4 letters", "rsk_word_shape_batch", (words, 3)),
        ("weak LIS 4 x 2e4 letters", "lis_weak_batch", (words, 3)),
        ("RSK array patterns 20 x (200x4)", "rsk_array_pattern_batch", (arr,)),
    ]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _kernels is None:
        print("compiled extension not built; only the Python backend is available")
        return
    print(f"{'kernel':<36}{'python s':>10}{'compiled s':>12}{'speedup':>10}")
    for label, name, fargs in cases():
        tp, outp = best_time(lambda: getattr(_kernels_py, name)(*fargs), args.repeat)
        tc, outc = best_time(lambda: getattr(_kernels, name)(*fargs), args.repeat)
        np.testing.assert_allclose(outc, outp, atol=1e-10)
        print(f"{label:<36}{tp:>10.4f}{tc:>12.5f}{tp / tc:>9.1f}x")


if __name__ == "__main__":
    main()
