"""Compare the compiled and pure-Python Jacobi kernels.

    python3 benchmarks/bench_jacobi.py --count 500 --dims 2,4,8,12
"""

import argparse
import time

import numpy as np

from loewner_lab.hermitian import KERNELS, HermitianMatrix, eig


def workload(count, dims, seed):
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        n = dims[i % len(dims)]
        out.append(HermitianMatrix(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))))
    return out


def bench(backend, mats):
    # fresh copies so the per-matrix decomposition cache never hits
    mats = [HermitianMatrix(h.entries) for h in mats]
    start = time.perf_counter()
    worst = 0.0
    for h in mats:
        d = eig(h, backend=backend)
        worst = max(worst, np.linalg.norm(d.reconstruct() - h.entries) / h.frobenius())
    return time.perf_counter() - start, worst


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--count", type=int, default=500)
    parser.add_argument("--dims", default="2,4,8,12")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    dims = [int(d) for d in args.dims.split(",")]
    mats = workload(args.count, dims, args.seed)
    timings = {}
    for backend in sorted(KERNELS):
        elapsed, worst = bench(backend, mats)
        timings[backend] = elapsed
        print(f"{backend:>8}: {elapsed * 1e3:9.1f} ms  ({elapsed / args.count * 1e6:8.1f} us/eig, worst rel. residual {worst:.1e})")
    if len(timings) == 2:
        print(f" speedup: {timings['python'] / timings['cython']:.1f}x")
    else:
        print(" compiled kernel unavailable; only the fallback was timed")


if __name__ == "__main__":
    main()
