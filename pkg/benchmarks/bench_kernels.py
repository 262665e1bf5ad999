"""Time the numba kernels against their pure-numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat N]

Both paths are called in-process through the ``jit=`` switch, so the
environment flag does not need to change between runs.
"""

import argparse
import time

import numpy as np

from taylorres import kernels


def bench(fn, repeat):
    fn()  # warm-up (also triggers compilation)
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best * 1e3


def cases(rng):
    for m in (12, 16, 20):
        gens = rng.integers(0, 4, size=(m, 6))
        yield f"subset_join_table m={m}", lambda jit, g=gens: kernels.subset_join_table(g, jit=jit)
    for n in (64, 160, 320):
        a = rng.integers(0, 32003, size=(n, n))
        yield f"rref_modp {n}x{n}", lambda jit, a=a: kernels.rref_modp(a, 32003, jit=jit)
    for n in (64, 160, 320):
        a = rng.integers(0, 32003, size=(n, n))
        b = rng.integers(0, 32003, size=(n, n))
        yield f"matmul_modp {n}x{n}", lambda jit, a=a, b=b: kernels.matmul_modp(a, b, 32003, jit=jit)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if not kernels.USE_JIT:
        print(f"numba unavailable or disabled ({kernels.ENV_FLAG} set); timing numpy only")
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<28}{'numpy ms':>12}{'numba ms':>12}{'speedup':>10}")
    for name, fn in cases(rng):
        t_np = bench(lambda: fn(False), args.repeat)
        if kernels.USE_JIT:
            ref, got = fn(False), fn(True)
            same = all(np.array_equal(x, y) for x, y in zip(ref, got)) if isinstance(ref, tuple) else np.array_equal(ref, got)
            if not same:
                raise SystemExit(f"{name}: backends disagree")
            t_nb = bench(lambda: fn(True), args.repeat)
            print(f"{name:<28}{t_np:>12.2f}{t_nb:>12.2f}{t_np / t_nb:>9.1f}x")
        else:
            print(f"{name:<28}{t_np:>12.2f}{'-':>12}{'-':>10}")


if __name__ == "__main__":
    main()
