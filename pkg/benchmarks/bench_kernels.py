"""Compare the compiled and pure-Python Hermite kernels.

Run with ``python benchmarks/bench_kernels.py``.  Each case reduces random
generator rows modulo ``N`` in ``k`` columns; the end-to-end case times a four-stage
commutant tower with each backend forced in turn.
"""
import argparse
import random
import timeit

import numpy as np

from endocomm import _kernels
from endocomm.modules import scalar_module
from endocomm.tower import endo_tower

CASES = [(4, 8, 12), (16, 32, 24), (36, 72, 60), (64, 128, 16)]


def random_rows(k, m, N, seed):
    rng = random.Random(seed)
    return [[rng.randrange(N) for _ in range(k)] for _ in range(m)]


def bench_case(k, m, N, repeat):
    rows = random_rows(k, m, N, seed=k * 1000 + N)
    arr = np.array(rows, dtype=np.int64)
    t_py = min(timeit.repeat(lambda: _kernels.hnf_mod_py(rows, k, N), number=1, repeat=repeat))
    if _kernels.hnf_mod_c is None:
        return t_py, None
    assert [list(r) for r in _kernels.hnf_mod_c(arr, k, N)] == [list(r) for r in _kernels.hnf_mod_py(rows, k, N)]
    t_c = min(timeit.repeat(lambda: _kernels.hnf_mod_c(arr, k, N), number=1, repeat=repeat))
    return t_py, t_c


def bench_tower(factors, repeat):
    a = scalar_module(factors)
    out = {}
    saved = _kernels.hnf_mod_c
    try:
        for name, fn in (("python", None), ("cython", saved)):
            if name == "cython" and saved is None:
                continue
            _kernels.hnf_mod_c = fn
            out[name] = min(timeit.repeat(lambda: endo_tower(a, 4), number=1, repeat=repeat))
    finally:
        _kernels.hnf_mod_c = saved
    return out


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args()
    print(f"backend selected at import: {_kernels.BACKEND}")
    print(f"{'cols':>5} {'rows':>5} {'mod':>5} {'python ms':>10} {'cython ms':>10} {'speedup':>8}")
    for k, m, N in CASES:
        t_py, t_c = bench_case(k, m, N, args.repeat)
        if t_c is None:
            print(f"{k:>5} {m:>5} {N:>5} {t_py * 1e3:>10.2f} {'n/a':>10} {'n/a':>8}")
        else:
            print(f"{k:>5} {m:>5} {N:>5} {t_py * 1e3:>10.2f} {t_c * 1e3:>10.2f} {t_py / t_c:>7.1f}x")
    for factors in ((2, 4, 8), (2, 2, 2, 2, 2, 2), (2, 4, 8, 8)):
        r = bench_tower(factors, args.repeat)
        cols = "  ".join(f"{k} {v * 1e3:.1f} ms" for k, v in r.items())
        print(f"tower depth 4 of {factors}: {cols}")


if __name__ == "__main__":
    main()
