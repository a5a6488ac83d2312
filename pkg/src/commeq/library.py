"""Small algebras that come up again and again."""
import itertools

import numpy as np

from .algebra import FiniteAlgebra


def cyclic_group(n: int) -> FiniteAlgebra:
    """Z_n with ``plus``, ``neg``, ``zero``."""
    plus = [(a + b) % n for a in range(n) for b in range(n)]
    neg = [(-a) % n for a in range(n)]
    return FiniteAlgebra(n, [("plus", 2), ("neg", 1), ("zero", 0)],
                         {"plus": plus, "neg": neg, "zero": [0]})


def symmetric_group_s3() -> FiniteAlgebra:
    """S3 with ``mul``, ``inv``, ``e``.

    Elements are the permutations of (0, 1, 2) in lexicographic order, so 0
    is the identity; ``mul(g, h)`` is ``g`` after ``h``.
    """
    perms = list(itertools.permutations(range(3)))
    index = {p: i for i, p in enumerate(perms)}
    mul = [index[tuple(g[h[x]] for x in range(3))] for g in perms for h in perms]
    inv = [index[tuple(sorted(range(3), key=lambda x: g[x]))] for g in perms]
    return FiniteAlgebra(6, [("mul", 2), ("inv", 1), ("e", 0)],
                         {"mul": mul, "inv": inv, "e": [0]})


def s3_permutations():
    return list(itertools.permutations(range(3)))


def two_element_lattice() -> FiniteAlgebra:
    return FiniteAlgebra(2, [("meet", 2), ("join", 2)],
                         {"meet": [0, 0, 0, 1], "join": [0, 1, 1, 1]})


def majority_algebra() -> FiniteAlgebra:
    """The two-element set with the ternary majority operation ``maj``."""
    maj = [int(a + b + c >= 2) for a in range(2) for b in range(2) for c in range(2)]
    return FiniteAlgebra(2, [("maj", 3)], {"maj": maj})


def counterexample_carrier() -> FiniteAlgebra:
    """The 8-element projection algebra {a, b, c1..c6} as 0, 1, 2..7."""
    aliases = {"a": 0, "b": 1}
    aliases.update({f"c{i}": i + 1 for i in range(1, 7)})
    return FiniteAlgebra(8, aliases=aliases)


def random_algebra(rng: np.random.Generator, size: int, arities=(2,), planted=None) -> FiniteAlgebra:
    """Random tables; with ``planted`` (a Partition) every table respects it."""
    tables = {}
    sig = []
    for i, r in enumerate(arities):
        name = f"f{i}"
        sig.append((name, r))
        if planted is None:
            tables[name] = rng.integers(0, size, size ** r)
            continue
        blocks = planted.blocks()
        block_of = {a: bi for bi, b in enumerate(blocks) for a in b}
        # pick a block-level table, then lift it to random members
        coarse = {}
        vals = []
        for args in itertools.product(range(size), repeat=r):
            key = tuple(block_of[a] for a in args)
            if key not in coarse:
                coarse[key] = int(rng.integers(0, len(blocks)))
            target = blocks[coarse[key]]
            vals.append(int(target[rng.integers(0, len(target))]))
        tables[name] = vals
    return FiniteAlgebra(size, sig, tables)
