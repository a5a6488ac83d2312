import itertools

import numpy as np
import pytest

from commeq import _closure_py, kernels

HAVE_CYTHON = "cython" in kernels.BACKENDS
needs_cython = pytest.mark.skipif(not HAVE_CYTHON, reason="compiled extension not built")


def _workload(rng):
    n = int(rng.integers(2, 5))
    arities = [int(a) for a in rng.integers(0, 3, size=int(rng.integers(1, 3)))]
    tables = [rng.integers(0, n, size=n ** r) for r in arities]
    k = int(rng.integers(1, 5))
    gens = rng.integers(0, n, size=(int(rng.integers(1, 4)), k))
    return n, k, tables, arities, gens


def _naive_closure(n, k, tables, arities, gens):
    elems = {tuple(int(v) for v in g) for g in gens}
    for tab, r in zip(tables, arities):
        if r == 0:
            elems.add((int(tab[0]),) * k)
    while True:
        new = set()
        for tab, r in zip(tables, arities):
            for args in itertools.product(elems, repeat=r):
                row = []
                for c in range(k):
                    idx = 0
                    for a in args:
                        idx = idx * n + a[c]
                    row.append(int(tab[idx]))
                new.add(tuple(row))
        if new <= elems:
            return elems
        elems |= new


def _check_parents(n, k, tables, arities, gens, elems, parents):
    for e, row in enumerate(elems):
        op = parents[e, 0]
        if op == -1:
            assert list(row) == list(gens[parents[e, 1]])
        elif op == -2:
            assert (row == tables[parents[e, 1]][0]).all()
        else:
            args = parents[e, 1:1 + arities[op]]
            assert all(0 <= a < e for a in args) or arities[op] == 0
            for c in range(k):
                idx = 0
                for a in args:
                    idx = idx * n + elems[a, c]
                assert row[c] == tables[op][idx]


def test_python_closure_matches_naive(rng):
    for _ in range(40):
        n, k, tables, arities, gens = _workload(rng)
        elems, parents, complete = _closure_py.power_closure(n, k, tables, arities, gens, 10 ** 6)
        assert complete
        rows = [tuple(int(v) for v in r) for r in elems]
        assert len(set(rows)) == len(rows)
        assert set(rows) == _naive_closure(n, k, tables, arities, gens)
        _check_parents(n, k, tables, arities, gens, elems, parents)


@needs_cython
def test_backends_agree(rng):
    for _ in range(60):
        n, k, tables, arities, gens = _workload(rng)
        cap = int(rng.integers(1, 80))
        steps = int(rng.integers(-1, 400))
        a = kernels.power_closure(n, k, tables, arities, gens, cap, steps, backend="python")
        b = kernels.power_closure(n, k, tables, arities, gens, cap, steps, backend="cython")
        assert np.array_equal(a[0], b[0])
        assert np.array_equal(a[1], b[1])
        assert a[2] == b[2]


@pytest.mark.parametrize("backend", ["python", pytest.param("cython", marks=needs_cython)])
def test_truncation_is_a_prefix(rng, backend):
    for _ in range(20):
        n, k, tables, arities, gens = _workload(rng)
        full, fpar, complete = kernels.power_closure(n, k, tables, arities, gens, 10 ** 6,
                                                     backend=backend)
        assert complete
        for cap in sorted({1, 2, max(1, len(full) // 2), len(full)}):
            part, ppar, done = kernels.power_closure(n, k, tables, arities, gens, cap,
                                                     backend=backend)
            assert np.array_equal(part, full[:len(part)])
            assert np.array_equal(ppar, fpar[:len(part)])
            assert done == (cap >= len(full))
        for steps in (0, 5, 50):
            part, _, done = kernels.power_closure(n, k, tables, arities, gens, 10 ** 6, steps,
                                                  backend=backend)
            assert np.array_equal(part, full[:len(part)])
            if done:
                assert len(part) == len(full)


def test_backend_selection():
    assert kernels.BACKEND in kernels.BACKENDS
    assert "python" in kernels.BACKENDS
