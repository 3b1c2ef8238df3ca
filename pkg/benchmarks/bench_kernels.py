"""Compare the numba and numpy backends of the group-program kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]

Both backends are imported directly, so the PHEKIT_DISABLE_NUMBA flag does
not matter here. The first numba call (compilation) is excluded.
"""

import argparse
import random
import statistics
import time

import numpy as np

from phekit import _kernels
from phekit.group_encoding import CircuitBuilder, all_assignments, compile_circuit


def and_tree(n):
    b = CircuitBuilder()
    layer = [b.input(i) for i in range(n)]
    while len(layer) > 1:
        layer = [b.and_(layer[i], layer[i + 1]) for i in range(0, len(layer), 2)]
    return b.build()


def timeit(fn, repeat):
    fn()  # warm-up / JIT
    samples = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    rows = []
    for n in (4, 8, 16):
        idx, mats = compile_circuit(and_tree(n)).to_arrays()
        if n <= 12:
            xs = all_assignments(n)
        else:
            xs = np.random.default_rng(0).integers(0, 2, size=(4096, n), dtype=np.uint8)
        label = f"eval_batch and{n} L={len(idx)} B={len(xs)}"
        t_np = timeit(lambda: _kernels.eval_batch_numpy(idx, mats, xs), args.repeat)
        t_nb = timeit(lambda: _kernels.eval_batch_numba(idx, mats, xs), args.repeat)
        np.testing.assert_array_equal(
            _kernels.eval_batch_numpy(idx, mats, xs), _kernels.eval_batch_numba(idx, mats, xs)
        )
        rows.append((label, t_np, t_nb))

    rng = random.Random(0)
    for length in (1_000, 100_000):
        perms = np.array([rng.sample(range(7), 7) for _ in range(length)], dtype=np.uint8)
        t_np = timeit(lambda: _kernels.perm_product_numpy(perms), args.repeat)
        t_nb = timeit(lambda: _kernels.perm_product_numba(perms), args.repeat)
        rows.append((f"perm_product L={length}", t_np, t_nb))

    print(f"{'kernel':<36} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}")
    for label, a, b in rows:
        print(f"{label:<36} {a * 1e3:>10.3f} {b * 1e3:>10.3f} {a / b:>8.1f}")


if __name__ == "__main__":
    main()
