"""Compare the numba and numpy permanent kernels.

    python3 benchmarks/bench_kernels.py [--sizes 4 5 6 7 8] [--matrices 20] [--seed 0]

Times are per matrix, best of ``--repeat`` runs, JIT compilation excluded.
Both backends must return identical results; a mismatch aborts the run.
"""

import argparse
import time

import numpy as np

from supertrop import _kernels
from supertrop.harness import Profile, random_matrix
from supertrop.matrix import _encode

KERNELS = {
    "enumerate": _kernels.permanent_enumerate,
    "dp": _kernels.permanent_dp,
    "minors": _kernels.minor_table,
    "principal": _kernels.principal_table,
}


def _inputs(n, count, seed):
    rng = np.random.default_rng(seed)
    prof = Profile(lo=-3, hi=3, ghost_prob=0.2, zero_prob=0.1)
    return [_encode(random_matrix(n, prof, rng=rng))[:3] for _ in range(count)]


def _canon(res):
    return [np.asarray(x).tolist() for x in res]


def _time(fn, batch, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        for args in batch:
            fn(*args)
        best = min(best, time.perf_counter() - t)
    return best / len(batch)


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[4, 5, 6, 7, 8])
    p.add_argument("--matrices", type=int, default=20)
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kernels", nargs="+", choices=sorted(KERNELS), default=sorted(KERNELS))
    args = p.parse_args()
    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")

    print(f"{'kernel':<10} {'n':>2} {'numpy [ms]':>12} {'numba [ms]':>12} {'speedup':>8}")
    for name in args.kernels:
        fn = KERNELS[name]
        for n in args.sizes:
            batch = _inputs(n, args.matrices, args.seed + n)
            out = {}
            for backend in ("numpy", "numba"):
                with _kernels.use_backend(backend):
                    fn(*batch[0])  # warm caches and the JIT
                    out[backend] = (_time(fn, batch, args.repeat), [_canon(fn(*b)) for b in batch])
            if out["numpy"][1] != out["numba"][1]:
                raise SystemExit(f"backend mismatch in {name} at n={n}")
            t_np, t_nb = out["numpy"][0], out["numba"][0]
            print(f"{name:<10} {n:>2} {t_np * 1e3:>12.3f} {t_nb * 1e3:>12.3f} {t_np / t_nb:>7.1f}x")


if __name__ == "__main__":
    main()
