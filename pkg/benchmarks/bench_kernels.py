"""Compare the compiled and numpy kernels on the hot paths.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from reur import ising
from reur._backend import compiled_kernels, python_kernels


def cases(k):
    m = np.linspace(-99.0, 0.999, 2000)
    x = np.linspace(0.0, 0.999, 2000)
    ref = ising.IsingCouplings(0.5, 1.0)
    c, s = ref.grid.half_phase()
    w1 = ref.omegas()
    ratios = ising.default_ratio_grid()
    return {
        "ellipke (2000 parameters)": lambda: k.ellipke(m),
        "polylog_half (2000 points)": lambda: k.polylog_half(x),
        "ising_scan (1201 ratios, N=10)": lambda: k.ising_scan(w1, ratios, 1.0, c, s),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    backends = [("python", python_kernels)]
    if compiled_kernels is not None:
        backends.append(("cython", compiled_kernels))
    else:
        print("compiled extension not built; timing the numpy kernels only")
    timings = {}
    for name, k in backends:
        for label, fn in cases(k).items():
            fn()
            timings.setdefault(label, {})[name] = min(
                timeit.repeat(fn, number=1, repeat=args.repeat))
    print(f"{'kernel':34s} {'python [ms]':>12s} {'cython [ms]':>12s} {'speed-up':>9s}")
    for label, t in timings.items():
        py = t["python"] * 1e3
        cy = t.get("cython")
        if cy is None:
            print(f"{label:34s} {py:12.3f} {'-':>12s} {'-':>9s}")
        else:
            print(f"{label:34s} {py:12.3f} {cy * 1e3:12.3f} {py / (cy * 1e3):8.1f}x")


if __name__ == "__main__":
    main()
