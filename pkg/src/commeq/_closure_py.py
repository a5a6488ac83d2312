"""Pure-Python (numpy-batched) subpower closure.

Reference implementation of the kernel in ``_closure.pyx``.  Both produce the
same elements in the same order, with the same parent records.

Enumeration order: elements are processed in insertion order.  When element
``i`` is processed, each operation (in signature order) is applied to every
argument tuple whose largest index is ``i``.  Tuples are grouped by the first
position ``p`` holding ``i``; positions before ``p`` range over ``[0, i)``,
positions after it over ``[0, i]``, and each group is visited lexicographically.
"""
import numpy as np


def power_closure(n, k, tables, arities, gens, max_elems, max_steps=-1):
    """Close ``gens`` (rows of length ``k`` over ``0..n-1``) under ``tables``.

    Returns ``(elems, parents, complete)``.  ``parents[e, 0]`` is the
    operation index that produced ``e`` (``-1`` for generators, ``-2`` for
    constants) and ``parents[e, 1:1+arity]`` the argument element indices; for
    generators ``parents[e, 1]`` is the generator's row in ``gens``.
    ``complete`` is False when ``max_elems`` was hit before the fixpoint, or
    when more than ``max_steps`` operation applications were needed
    (``max_steps < 0`` means no limit).
    """
    gens = np.asarray(gens, dtype=np.int32).reshape(-1, k)
    tables = [np.asarray(t, dtype=np.int64).ravel() for t in tables]
    arities = [int(a) for a in arities]
    width = 1 + max([1] + arities)

    cap = 64
    elems = np.empty((cap, k), dtype=np.int32)
    parents = np.full((cap, width), -1, dtype=np.int64)
    index = {}
    count = 0

    def insert(row, parent):
        nonlocal cap, elems, parents, count
        key = row.tobytes()
        if key in index:
            return True
        if count >= max_elems:
            return False
        if count == cap:
            cap *= 2
            elems = np.resize(elems, (cap, k))
            grown = np.full((cap, width), -1, dtype=np.int64)
            grown[:count] = parents[:count]
            parents = grown
        elems[count] = row
        parents[count, :len(parent)] = parent
        index[key] = count
        count += 1
        return True

    for g in range(gens.shape[0]):
        if not insert(gens[g], (-1, g)):
            return elems[:count].copy(), parents[:count].copy(), False
    for f, (tab, r) in enumerate(zip(tables, arities)):
        if r == 0:
            row = np.full(k, tab[0], dtype=np.int32)
            if not insert(row, (-2, f)):
                return elems[:count].copy(), parents[:count].copy(), False

    steps = 0
    i = 0
    while i < count:
        for f, (tab, r) in enumerate(zip(tables, arities)):
            if r == 0:
                continue
            for p in range(r):
                if p > 0 and i == 0:
                    continue
                ranges = [np.arange(i)] * p + [np.array([i])] + [np.arange(i + 1)] * (r - p - 1)
                grids = np.meshgrid(*ranges, indexing="ij")
                argidx = np.stack([g.ravel() for g in grids], axis=1)
                flat = np.zeros((argidx.shape[0], k), dtype=np.int64)
                for j in range(r):
                    flat = flat * n + elems[argidx[:, j]]
                out = tab[flat].astype(np.int32)
                for t in range(out.shape[0]):
                    steps += 1
                    if 0 <= max_steps < steps:
                        return elems[:count].copy(), parents[:count].copy(), False
                    parent = (f,) + tuple(int(a) for a in argidx[t])
                    if not insert(out[t], parent):
                        return elems[:count].copy(), parents[:count].copy(), False
        i += 1
    return elems[:count].copy(), parents[:count].copy(), True
