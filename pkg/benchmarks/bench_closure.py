"""Compare the compiled and pure-Python subpower closure kernels.

    python3 benchmarks/bench_closure.py [--repeat 3]

Each workload is run on every available backend; results must agree exactly.
"""
import argparse
import time

import numpy as np

from commeq.algebra import _power_coords
from commeq.commutator import matrix_generators
from commeq.kernels import BACKENDS
from commeq.library import cyclic_group, random_algebra, symmetric_group_s3
from commeq.relations import Partition


def _signature(A):
    names = A.signature.names
    return [A.tables[s] for s in names], [A.signature.arity(s) for s in names]


def s3_ternary(limit):
    # ternary term operations of S3 restricted to x3 in {x1, x2}
    A = symmetric_group_s3()
    pairs = _power_coords(6, 2)
    cols = np.concatenate([np.c_[pairs, pairs[:, 0]], np.c_[pairs, pairs[:, 1]]])
    tables, arities = _signature(A)
    return (6, cols.shape[0], tables, arities, cols.T.copy(), limit)


def z4_binary():
    A = cyclic_group(4)
    coords = _power_coords(4, 2)
    tables, arities = _signature(A)
    return (4, 16, tables, arities, coords.T.copy(), 10**6)


def random_matrices():
    rng = np.random.default_rng(7)
    full = Partition.full(5)
    A = random_algebra(rng, 5, (2, 2))
    gens = matrix_generators(full, full)
    tables, arities = _signature(A)
    return (5, 4, tables, arities, gens, 10**6)


WORKLOADS = {
    "S3 ternary ops, 20k prefix": lambda: s3_ternary(20_000),
    "Z4 binary term ops": z4_binary,
    "random 5-elt matrices": random_matrices,
}


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    print(f"{'workload':32} {'backend':8} {'elements':>9} {'best s':>9}")
    for name, make in WORKLOADS.items():
        call = make()
        results = {}
        for backend, fn in BACKENDS.items():
            best = float("inf")
            for _ in range(args.repeat):
                t = time.perf_counter()
                out = fn(*call)
                best = min(best, time.perf_counter() - t)
            results[backend] = (out, best)
            print(f"{name:32} {backend:8} {out[0].shape[0]:9d} {best:9.4f}")
        outs = [r[0] for r in results.values()]
        for other in outs[1:]:
            assert np.array_equal(outs[0][0], other[0]) and np.array_equal(outs[0][1], other[1])
        if len(results) == 2:
            ratio = results["python"][1] / max(results["cython"][1], 1e-9)
            print(f"{'':32} speedup {ratio:.1f}x")


if __name__ == "__main__":
    main()
