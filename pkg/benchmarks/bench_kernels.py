"""Time the numba kernels against their numpy twins.

    python3 benchmarks/bench_kernels.py [--repeat 5]

The numba column excludes the first (compiling) call.
"""
import argparse
import timeit

import numpy as np

from irs_sense import kernels
from irs_sense._backend import HAS_NUMBA


def cases(rng):
    R, M, nbar, L = 2000, 100, 100, 1024
    T = 1.0 + 0.1 * rng.standard_normal((R, M))
    y = (rng.standard_normal((50, M * nbar)) + 1j * rng.standard_normal((50, M * nbar)))
    coupling = rng.standard_normal(L) + 1j * rng.standard_normal(L)
    phases = rng.uniform(0, 2 * np.pi, (L, M))
    stats = rng.standard_normal(100_000)
    thr = np.sort(rng.standard_normal(200))
    return {
        "block_energies": ((y, M, nbar, 1.0), {}),
        "wed_statistics": ((T, 0.2), {}),
        "effective_channels": ((0.3 + 0.1j, coupling, phases), {}),
        "exceed_counts": ((stats, thr), {}),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    print(f"{'kernel':<20}{'numpy ms':>12}{'numba ms':>12}{'speedup':>10}")
    for name, (a, kw) in cases(rng).items():
        f_np = getattr(kernels, f"{name}_np")
        t_np = min(timeit.repeat(lambda: f_np(*a, **kw), number=1, repeat=args.repeat)) * 1e3
        if HAS_NUMBA:
            f_nb = getattr(kernels, f"{name}_nb")
            ref, got = f_np(*a, **kw), f_nb(*a, **kw)
            assert np.allclose(ref, got, rtol=1e-10, atol=1e-12), name
            t_nb = min(timeit.repeat(lambda: f_nb(*a, **kw), number=1, repeat=args.repeat)) * 1e3
            print(f"{name:<20}{t_np:>12.2f}{t_nb:>12.2f}{t_np / t_nb:>9.1f}x")
        else:
            print(f"{name:<20}{t_np:>12.2f}{'n/a':>12}{'':>10}")


if __name__ == "__main__":
    main()
