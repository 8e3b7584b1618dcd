"""Compare the numpy and numba theta product kernels.

    python3 benchmarks/bench_theta_kernels.py [--samples N] [--terms J] [--repeat R]

Both backends evaluate all four theta families on the same random samples;
the script reports the best wall time per backend and the largest relative
disagreement between them.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from transverify import _kernels


def make_samples(n: int, seed: int = 0):
    rng = np.random.default_rng(seed)
    v = rng.uniform(-0.5, 0.5, n) + 1j * rng.uniform(-0.2, 0.2, n)
    tau = rng.uniform(-0.5, 0.5, n) + 1j * rng.uniform(0.6, 1.5, n)
    return v.astype(np.complex128), tau.astype(np.complex128)


def run(backend: str, v, tau, J: int):
    return [_kernels.theta_kernel(code, v, tau, J, backend=backend) for code in range(4)]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=20000)
    ap.add_argument("--terms", type=int, default=40)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    v, tau = make_samples(args.samples)
    backends = ["numpy"] + (["numba"] if _kernels._theta_jit is not None else [])
    results = {}
    for b in backends:
        run(b, v[:4], tau[:4], args.terms)          # compile / warm up
        t = min(timeit.repeat(lambda: run(b, v, tau, args.terms), number=1, repeat=args.repeat))
        results[b] = run(b, v, tau, args.terms)
        print(f"{b:6s} {t * 1e3:9.2f} ms  ({args.samples} samples x 4 families, J={args.terms})")

    if len(results) == 2:
        worst = 0.0
        for (a, da), (c, dc) in zip(results["numpy"], results["numba"]):
            for x, y in ((a, c), (da, dc)):
                worst = max(worst, float(np.max(np.abs(x - y) / np.maximum(1.0, np.abs(x)))))
        print(f"max relative difference numpy vs numba: {worst:.2e}")
    else:
        print("numba unavailable; only the numpy backend was timed")


if __name__ == "__main__":
    main()
