"""Compare the compiled and numpy step-CDF kernels.

Run ``python3 benchmarks/bench_kernels.py [--sizes 100,1000,10000]``. Each
row times one call on a random empirical forecast with ``m`` atoms scored at
``m`` realisations, then checks both backends agree.
"""

import argparse
import timeit

import numpy as np

from tailscore import backend


def _step(rng, m):
    locs = np.sort(rng.standard_normal(m))
    cum = np.arange(1, m + 1, dtype=float) / m
    return locs, cum


def cases(m, seed=0):
    rng = np.random.default_rng(seed)
    la, ca = _step(rng, m)
    lb, cb = _step(rng, m)
    lt, ct = _step(rng, m)
    z = np.sort(rng.standard_normal(m) * 2)
    q = -0.5
    z = np.ascontiguousarray(z[z >= q])
    return {
        "step_wcrps": (la, ca, z, q),
        "step_pair_integrals": (la, ca, lb, cb, lt, ct, q),
    }


def bench(sizes, repeat=5):
    if backend.compiled_kernels is None:
        print("compiled extension not built; timing the numpy backend only")
    print(f"{'kernel':<22}{'m':>8}{'python [ms]':>14}{'cython [ms]':>14}{'speedup':>10}{'max |diff|':>13}")
    for m in sizes:
        for name, args in cases(m).items():
            py = getattr(backend.python_kernels, name)
            t_py = min(timeit.repeat(lambda: py(*args), number=1, repeat=repeat))
            ref = np.atleast_1d(py(*args))
            if backend.compiled_kernels is None:
                print(f"{name:<22}{m:>8}{t_py * 1e3:>14.3f}{'-':>14}{'-':>10}{'-':>13}")
                continue
            cy = getattr(backend.compiled_kernels, name)
            t_cy = min(timeit.repeat(lambda: cy(*args), number=1, repeat=repeat))
            diff = float(np.max(np.abs(np.atleast_1d(cy(*args)) - ref), initial=0.0))
            print(f"{name:<22}{m:>8}{t_py * 1e3:>14.3f}{t_cy * 1e3:>14.3f}"
                  f"{t_py / t_cy:>10.1f}{diff:>13.1e}")


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="100,1000,10000,100000")
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    bench([int(s) for s in args.sizes.split(",")], args.repeat)


if __name__ == "__main__":
    main()
