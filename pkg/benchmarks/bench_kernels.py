"""Compare the compiled and pure-Python kernels on the same random inputs.

    python benchmarks/bench_kernels.py [--repeat N] [--seed S]

Each case is run on every available backend; results are checked for
equality before timings are printed.
"""

from __future__ import annotations

import argparse
import random
import sys
import timeit

import numpy as np

from entromono import _kernels


def cover_case(rng: random.Random, nbits: int, nmembers: int, density: float):
    members = []
    for _ in range(nmembers):
        m = 0
        for b in range(nbits):
            if rng.random() < density:
                m |= 1 << b
        members.append(m)
    universe = 0
    for m in members:
        universe |= m
    return universe, members, nbits


def sumset_case(rng: random.Random, moduli: list[int], size: int):
    total = int(np.prod(moduli))
    a = np.unique(np.array([rng.randrange(total) for _ in range(size)], dtype=np.int64))
    b = np.unique(np.array([rng.randrange(total) for _ in range(size)], dtype=np.int64))
    return a, b, moduli, 1 << 24


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    rng = random.Random(args.seed)
    backends = _kernels.available_backends()
    if len(backends) < 2:
        print("compiled backend not built; only the Python kernels are available", file=sys.stderr)

    cases = [
        ("min_cover 40 members / 32 bits", "min_cover", cover_case(rng, 32, 40, 0.2)),
        ("min_cover 80 members / 48 bits", "min_cover", cover_case(rng, 48, 80, 0.15)),
        ("min_cover 120 members / 64 bits", "min_cover", cover_case(rng, 64, 120, 0.15)),
        ("sumset 200 x 200 in (Z/4)^8", "sumset_codes", sumset_case(rng, [4] * 8, 200)),
        ("sumset 1500 x 1500 in (Z/2)^20", "sumset_codes", sumset_case(rng, [2] * 20, 1500)),
    ]
    names = sorted(backends)
    print(f"{'case':36s}" + "".join(f"{n:>12s}" for n in names) + f"{'speedup':>10s}")
    for label, fn, inputs in cases:
        outs, times = {}, {}
        for n in names:
            f = getattr(backends[n], fn)
            outs[n] = f(*inputs)
            times[n] = min(timeit.repeat(lambda: f(*inputs), number=1, repeat=args.repeat))
        ref = outs[names[0]]
        for n in names[1:]:
            same = np.array_equal(ref, outs[n]) if isinstance(ref, np.ndarray) else ref == outs[n]
            if not same:
                print(f"{label}: backends disagree", file=sys.stderr)
                return 1
        speed = times["python"] / times["cython"] if "cython" in times and times["cython"] > 0 else float("nan")
        print(f"{label:36s}" + "".join(f"{times[n] * 1e3:10.2f}ms" for n in names) + f"{speed:9.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
