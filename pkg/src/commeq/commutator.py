"""Term-condition centralizer and commutator via generated matrix subalgebras.

A matrix ``[[m11, m12], [m21, m22]]`` is stored as the row ``(m11, m12, m21,
m22)`` of ``A**4``.  ``M(alpha, beta)`` is the subalgebra of ``A**4``
generated by ``(a, a, b, b)`` for ``(a, b)`` in alpha and ``(u, v, u, v)`` for
``(u, v)`` in beta: rows vary along alpha, columns along beta.  Since alpha is
reflexive the constant matrices are among the generators, so every polynomial
matrix is reached.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np

from . import config
from .algebra import FiniteAlgebra
from .errors import CapacityExceeded
from .kernels import power_closure
from .relations import Partition, cg


@dataclass(frozen=True)
class MatrixSet:
    alpha: Partition
    beta: Partition
    rows: np.ndarray  # (count, 4): m11, m12, m21, m22

    def __len__(self):
        return self.rows.shape[0]

    def __iter__(self):
        for r in self.rows:
            yield ((int(r[0]), int(r[1])), (int(r[2]), int(r[3])))

    def __contains__(self, matrix):
        (a, b), (c, d) = matrix
        return bool(np.any(np.all(self.rows == np.array([a, b, c, d]), axis=1)))


def matrix_generators(alpha: Partition, beta: Partition) -> np.ndarray:
    gens = [(a, a, b, b) for a, b in alpha.rel.pairs()]
    gens += [(u, v, u, v) for u, v in beta.rel.pairs()]
    return np.array(gens, dtype=np.int32).reshape(-1, 4)


_cache: dict = {}
_cache_lock = threading.Lock()


def generate_matrices(A: FiniteAlgebra, alpha: Partition, beta: Partition) -> MatrixSet:
    key = (A.key, alpha.reps, beta.reps)
    hit = _cache.get(key)
    if hit is not None:
        return hit
    names = A.signature.names
    rows, _, complete = power_closure(
        A.size, 4, [A.tables[n] for n in names], [A.signature.arity(n) for n in names],
        matrix_generators(alpha, beta), config.MAX_UNIVERSE)
    if not complete:
        raise CapacityExceeded(f"matrix set exceeds cap of {config.MAX_UNIVERSE} elements")
    rows.setflags(write=False)
    result = MatrixSet(alpha, beta, rows)
    with _cache_lock:
        _cache[key] = result
    return result


def clear_cache():
    with _cache_lock:
        _cache.clear()


@dataclass
class CentralizerVerdict:
    holds: bool
    matrix: tuple | None = None  # violating ((m11, m12), (m21, m22))

    def __bool__(self):
        return self.holds


def centralizes(A: FiniteAlgebra, alpha: Partition, beta: Partition,
                delta: Partition) -> CentralizerVerdict:
    """C(alpha, beta; delta): top row delta-related forces bottom row delta-related."""
    rows = generate_matrices(A, alpha, beta).rows
    lab = np.asarray(delta.reps)
    top = lab[rows[:, 0]] == lab[rows[:, 1]]
    bottom = lab[rows[:, 2]] == lab[rows[:, 3]]
    bad = np.flatnonzero(top & ~bottom)
    if bad.size == 0:
        return CentralizerVerdict(True)
    r = rows[bad[0]]
    return CentralizerVerdict(False, ((int(r[0]), int(r[1])), (int(r[2]), int(r[3]))))


def commutator(A: FiniteAlgebra, alpha: Partition, beta: Partition) -> Partition:
    """[alpha, beta]: least delta with C(alpha, beta; delta)."""
    rows = generate_matrices(A, alpha, beta).rows
    delta = Partition.identity(A.size)
    while True:
        lab = np.asarray(delta.reps)
        forced = rows[(lab[rows[:, 0]] == lab[rows[:, 1]]) & (lab[rows[:, 2]] != lab[rows[:, 3]])]
        if forced.shape[0] == 0:
            return delta
        pairs = [(a, r) for a, r in enumerate(delta.reps) if a != r]
        pairs += [(int(c), int(d)) for c, d in forced[:, 2:4]]
        delta = cg(A, pairs)


def is_abelian_congruence(A: FiniteAlgebra, theta: Partition) -> bool:
    return commutator(A, theta, theta).is_identity()


def is_abelian_algebra(A: FiniteAlgebra) -> bool:
    return is_abelian_congruence(A, Partition.full(A.size))
