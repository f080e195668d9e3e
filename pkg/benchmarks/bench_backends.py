"""Benchmark the compiled kernel extension against the NumPy fallback.

Times the five hot kernels on representative sizes plus two end-to-end
workloads (extended updates and one full oracle run). Usage:

    python benchmarks/bench_backends.py [--repeats 2000]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from retroq import _backend
from retroq.equivalence import oracle_equivalent
from retroq.retrodiction import petz_extended
from retroq.sampling import random_belief, random_channel, random_density


def _time(fn, repeats: int) -> float:
    fn()  # warm up
    start = time.perf_counter()
    for _ in range(repeats):
        fn()
    return (time.perf_counter() - start) / repeats


def _kernel_cases(rng):
    kraus = rng.standard_normal((4, 2, 2)) + 1j * rng.standard_normal((4, 2, 2))
    rho = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    root = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    root = (root + root.conj().T) / 2
    core = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    big = rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16))
    return {
        "kraus_apply (4x 2x2)": lambda k: k.kraus_apply(kraus, rho),
        "kraus_adjoint (4x 2x2)": lambda k: k.kraus_adjoint_apply(kraus, rho),
        "partial_trace (2,4,2 -> keep 0,2)": lambda k: k.partial_trace(big, (2, 4, 2), (0, 2)),
        "petz_sandwich (S=2, R=4)": lambda k: k.petz_sandwich(root, core, 2, 4),
        "signature_sum (S=2, R=4)": lambda k: k.signature_sum(root, 2, 4),
    }


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=2000)
    args = parser.parse_args()

    names = _backend.available()
    if len(names) < 2:
        print(f"only {names} built; nothing to compare")

    rng = np.random.default_rng(99)
    rows = []
    for label, call in _kernel_cases(rng).items():
        per = {}
        for name in names:
            kernels = _backend._BY_NAME[name]
            per[name] = _time(lambda: call(kernels), args.repeats)
        rows.append((label, per))

    belief = random_belief(rng, 2, 4, kind="mixed")
    channel = random_channel(rng, 2, 2)
    sigmas = [random_density(rng, 2) for _ in range(8)]

    def update_batch():
        for sigma in sigmas:
            petz_extended(channel, belief, sigma)

    b1 = random_belief(rng, 2, 3, kind="mixed")
    b2 = random_belief(rng, 2, 2, kind="classical")

    previous = _backend.impl.NAME
    try:
        for label, fn, reps in (
            ("petz_extended x8 (S=2, R=4)", update_batch, max(args.repeats // 20, 10)),
            ("oracle_equivalent (one pair)", lambda: oracle_equivalent(b1, b2), 20),
        ):
            per = {}
            for name in names:
                _backend.use(name)
                per[name] = _time(fn, reps)
            rows.append((label, per))
    finally:
        _backend.use(previous)

    width = max(len(label) for label, _ in rows)
    header = f"{'case':<{width}}" + "".join(f"  {name:>12}" for name in names)
    if len(names) == 2:
        header += f"  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for label, per in rows:
        line = f"{label:<{width}}"
        for name in names:
            line += f"  {per[name] * 1e6:>10.2f}us"
        if len(names) == 2:
            line += f"  {per['python'] / per['compiled']:>7.1f}x"
        print(line)


if __name__ == "__main__":
    main()
