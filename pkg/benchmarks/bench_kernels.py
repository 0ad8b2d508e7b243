"""Wall-clock comparison of the numba and numpy batched BCD kernels.

    python benchmarks/bench_kernels.py --n 200000 --repeat 5

Results are checked against each other (and a scalar sample) before timing.
This measures host throughput of the kernels only; the cycle model used by
the pipelines is unaffected by the backend choice.
"""

import argparse
import random
import time

import numpy as np

from dfpcodesign import bcd


def random_bcd(rng, n, digits):
    return [bcd.int_to_bcd(rng.randrange(10 ** digits)) for _ in range(n)]


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description="numba vs numpy BCD kernel benchmark")
    parser.add_argument("--n", type=int, default=200_000, help="batch size")
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    a = bcd.pack(random_bcd(rng, args.n, 48))
    b = bcd.pack(random_bcd(rng, args.n, 48))
    x = bcd.pack(random_bcd(rng, args.n, 16), 1)
    y = bcd.pack(random_bcd(rng, args.n, 16), 1)

    kernels = {
        "cla_add": lambda be: bcd.cla_add_batch(a, b, 0, backend=be)[0],
        "shift_7": lambda be: bcd.shift_digits_batch(a, 7, backend=be),
        "validate": lambda be: bcd.validate_batch(a, backend=be),
        "multiply16": lambda be: bcd.multiply_batch(x, y, backend=be),
    }
    backends = sorted(bcd.BACKENDS)

    # warm up (numba compiles on first call) and cross-check
    for name, fn in kernels.items():
        outs = [fn(be) for be in backends]
        for other in outs[1:]:
            assert np.array_equal(outs[0], other), name
    sample = [bcd.bcd_cla_add(p, q)[0] for p, q in zip(bcd.unpack(a[:100]), bcd.unpack(b[:100]))]
    assert bcd.unpack(kernels["cla_add"](backends[0])[:100]) == sample

    print("%-11s" % "kernel" + "".join("%14s" % be for be in backends) + "   speedup")
    for name, fn in kernels.items():
        times = {be: best_of(lambda: fn(be), args.repeat) for be in backends}
        line = "%-11s" % name + "".join("%12.2fms" % (times[be] * 1e3) for be in backends)
        if "numba" in times and "numpy" in times:
            line += "   %6.2fx" % (times["numpy"] / times["numba"])
        print(line)


if __name__ == "__main__":
    main()
