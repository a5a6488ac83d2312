"""Binary relations, partitions, congruences and relational-term evaluation."""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from . import config
from .algebra import FiniteAlgebra
from .errors import (
    BudgetExceeded,
    CapacityExceeded,
    JoinRequiresEquivalences,
    OperandNotCongruence,
    SizeMismatch,
    UnboundVariable,
)
from .terms import Comm, Comp, Join, Meet, RelTerm, RVar, render, variables


class BinRel:
    """A binary relation on ``0..size-1`` stored as a boolean matrix."""

    __slots__ = ("size", "matrix", "_hash")

    def __init__(self, size: int, matrix=None):
        self.size = int(size)
        if matrix is None:
            matrix = np.zeros((size, size), dtype=bool)
        m = np.array(matrix, dtype=bool)
        if m.shape != (size, size):
            raise SizeMismatch(f"relation matrix has shape {m.shape}, expected {(size, size)}")
        m.setflags(write=False)
        self.matrix = m
        self._hash = None

    @classmethod
    def from_pairs(cls, size: int, pairs: Iterable[tuple[int, int]]) -> "BinRel":
        m = np.zeros((size, size), dtype=bool)
        for a, b in pairs:
            m[a, b] = True
        return cls(size, m)

    @classmethod
    def identity(cls, size: int) -> "BinRel":
        return cls(size, np.eye(size, dtype=bool))

    @classmethod
    def full(cls, size: int) -> "BinRel":
        return cls(size, np.ones((size, size), dtype=bool))

    def pairs(self) -> list[tuple[int, int]]:
        """Pairs in lexicographic order."""
        return [(int(a), int(b)) for a, b in np.argwhere(self.matrix)]

    def __contains__(self, pair):
        a, b = pair
        return bool(self.matrix[a, b])

    def __len__(self):
        return int(self.matrix.sum())

    def __eq__(self, other):
        if isinstance(other, Partition):
            other = other.rel
        return (isinstance(other, BinRel) and self.size == other.size
                and np.array_equal(self.matrix, other.matrix))

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.size, np.packbits(self.matrix).tobytes()))
        return self._hash

    def __le__(self, other):
        other = other.rel if isinstance(other, Partition) else other
        return bool(np.all(~self.matrix | other.matrix))

    def __repr__(self):
        return f"BinRel({self.size}, {self.pairs()})"

    def is_equivalence(self) -> bool:
        m = self.matrix
        if not m.diagonal().all() or not np.array_equal(m, m.T):
            return False
        return np.array_equal(_compose_matrix(m, m), m)

    def as_partition(self) -> "Partition":
        if not self.is_equivalence():
            raise JoinRequiresEquivalences("relation is not an equivalence")
        return Partition(self.size, [int(np.argmax(self.matrix[a])) for a in range(self.size)])


def _compose_matrix(r: np.ndarray, s: np.ndarray) -> np.ndarray:
    return (r.astype(np.int32) @ s.astype(np.int32)) > 0


class Partition:
    """An equivalence relation, stored as element -> least member of its block."""

    __slots__ = ("size", "reps", "_rel")

    def __init__(self, size: int, reps):
        reps = tuple(int(r) for r in reps)
        if len(reps) != size:
            raise SizeMismatch(f"partition of size {size} given {len(reps)} labels")
        # normalize arbitrary labels to least-member representatives
        least: dict[int, int] = {}
        for a, lab in enumerate(reps):
            least.setdefault(lab, a)
        self.size = int(size)
        self.reps = tuple(least[lab] for lab in reps)
        self._rel = None

    @classmethod
    def identity(cls, size: int) -> "Partition":
        return cls(size, range(size))

    @classmethod
    def full(cls, size: int) -> "Partition":
        return cls(size, [0] * size)

    @classmethod
    def from_blocks(cls, size: int, blocks: Iterable[Iterable[int]]) -> "Partition":
        """Build from blocks; elements not mentioned become singletons."""
        labels = list(range(size))
        seen = set()
        for block in blocks:
            block = list(block)
            for a in block:
                if not 0 <= a < size:
                    raise ValueError(f"element {a} outside 0..{size - 1}")
                if a in seen:
                    raise ValueError(f"element {a} occurs in two blocks")
                seen.add(a)
                labels[a] = min(block)
        return cls(size, labels)

    @property
    def rel(self) -> BinRel:
        if self._rel is None:
            r = np.asarray(self.reps)
            self._rel = BinRel(self.size, r[:, None] == r[None, :])
        return self._rel

    def blocks(self) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for a, r in enumerate(self.reps):
            out.setdefault(r, []).append(a)
        return [out[r] for r in sorted(out)]

    def num_blocks(self) -> int:
        return len(set(self.reps))

    def related(self, a: int, b: int) -> bool:
        return self.reps[a] == self.reps[b]

    def __contains__(self, pair):
        return self.reps[pair[0]] == self.reps[pair[1]]

    def is_identity(self) -> bool:
        return all(r == a for a, r in enumerate(self.reps))

    def is_full(self) -> bool:
        return all(r == 0 for r in self.reps)

    def __eq__(self, other):
        if isinstance(other, Partition):
            return self.reps == other.reps
        if isinstance(other, BinRel):
            return self.rel == other
        return NotImplemented

    def __hash__(self):
        return hash(self.rel)

    def __le__(self, other):
        if isinstance(other, Partition):
            return all(other.reps[a] == other.reps[r] for a, r in enumerate(self.reps))
        return self.rel <= other

    def __lt__(self, other):
        return self <= other and self != other

    def sort_key(self):
        return (-self.num_blocks(), self.reps)

    def __str__(self):
        return format_partition(self)

    def __repr__(self):
        return f"Partition({self.size}, {format_partition(self)})"


def format_partition(p: Partition, aliases: Mapping[int, str] | None = None) -> str:
    """Block notation ``{{0,2},{1,3}}``, singletons included."""
    name = (lambda a: aliases.get(a, str(a))) if aliases else str
    return "{" + ",".join("{" + ",".join(name(a) for a in b) + "}" for b in p.blocks()) + "}"


def parse_partition(text: str, size: int) -> Partition:
    """Parse block notation; omitted elements are singletons.

    ``0`` and ``1`` (or ``full``/``identity``) are accepted for the bottom and
    top of the partition lattice.
    """
    s = text.strip()
    if s in ("0", "identity"):
        return Partition.identity(size)
    if s in ("1", "full"):
        return Partition.full(size)
    if not (s.startswith("{") and s.endswith("}")):
        raise ValueError(f"partition literal must look like {{{{0,1}},{{2}}}}, got {text!r}")
    inner = s[1:-1].strip()
    blocks = []
    for m in re.finditer(r"\{([^{}]*)\}", inner):
        items = [x.strip() for x in m.group(1).split(",") if x.strip()]
        try:
            blocks.append([int(x) for x in items])
        except ValueError:
            raise ValueError(f"non-integer element in block {m.group(0)!r}") from None
    rest = re.sub(r"\{[^{}]*\}", "", inner).replace(",", "").strip()
    if rest:
        raise ValueError(f"malformed partition literal {text!r}")
    return Partition.from_blocks(size, blocks)


def _as_rel(r) -> BinRel:
    return r.rel if isinstance(r, Partition) else r


# --- lattice and relational operations -------------------------------------

class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, a):
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True

    def labels(self):
        return [self.find(a) for a in range(len(self.parent))]


def eqv_closure(R) -> Partition:
    """Least equivalence relation containing ``R``."""
    R = _as_rel(R)
    uf = _UnionFind(R.size)
    for a, b in R.pairs():
        uf.union(a, b)
    return Partition(R.size, uf.labels())


def compose(R, S) -> BinRel:
    R, S = _as_rel(R), _as_rel(S)
    if R.size != S.size:
        raise SizeMismatch("cannot compose relations of different sizes")
    return BinRel(R.size, _compose_matrix(R.matrix, S.matrix))


def meet(R, S):
    """Intersection; stays a Partition when both arguments are partitions."""
    if isinstance(R, Partition) and isinstance(S, Partition):
        if R.size != S.size:
            raise SizeMismatch("cannot meet partitions of different sizes")
        ids: dict[tuple[int, int], int] = {}
        return Partition(R.size, [ids.setdefault(pair, len(ids)) for pair in zip(R.reps, S.reps)])
    R, S = _as_rel(R), _as_rel(S)
    if R.size != S.size:
        raise SizeMismatch("cannot meet relations of different sizes")
    return BinRel(R.size, R.matrix & S.matrix)


def join(alpha, beta) -> Partition:
    """Join in the partition lattice; both arguments must be equivalences."""
    for x in (alpha, beta):
        if not isinstance(x, Partition) and not x.is_equivalence():
            raise JoinRequiresEquivalences("join is only defined for equivalence relations")
    if alpha.size != beta.size:
        raise SizeMismatch("cannot join partitions of different sizes")
    alpha = alpha if isinstance(alpha, Partition) else alpha.as_partition()
    beta = beta if isinstance(beta, Partition) else beta.as_partition()
    uf = _UnionFind(alpha.size)
    for a in range(alpha.size):
        uf.union(a, alpha.reps[a])
        uf.union(a, beta.reps[a])
    return Partition(alpha.size, uf.labels())


def cg(A: FiniteAlgebra, pairs: Iterable[tuple[int, int]] = ()) -> Partition:
    """Least congruence of ``A`` containing ``pairs``.

    Worklist over generating pairs: each pair is pushed through every unary
    translation ``x -> f(c_1, .., x, .., c_r)`` and images that join two
    classes are queued in turn.
    """
    n = A.size
    uf = _UnionFind(n)
    queue = []
    for a, b in pairs:
        if not (0 <= a < n and 0 <= b < n):
            raise ValueError(f"pair {(a, b)} outside universe")
        if uf.union(a, b):
            queue.append((a, b))
    ops = [(tab.reshape((n,) * arity), arity) for _, arity, tab in A.operations() if arity > 0]
    while queue:
        a, b = queue.pop()
        for t, arity in ops:
            for pos in range(arity):
                ta = np.take(t, a, axis=pos).ravel()
                tb = np.take(t, b, axis=pos).ravel()
                diff = ta != tb
                for x, y in zip(ta[diff].tolist(), tb[diff].tolist()):
                    if uf.union(x, y):
                        queue.append((x, y))
    return Partition(n, uf.labels())


def is_congruence(A: FiniteAlgebra, R) -> bool:
    from .algebra import compatibility_violation

    if isinstance(R, BinRel):
        if not R.is_equivalence():
            return False
        R = R.as_partition()
    return compatibility_violation(A, R) is None


_LATTICE_CACHE: dict[bytes, list[Partition]] = {}


def con_lattice(A: FiniteAlgebra, cap: int | None = None) -> list[Partition]:
    """All congruences of ``A``, ordered by (more blocks first, representatives).

    Join-closure of the principal congruences, seeded with the identity.
    """
    cap = config.MAX_CONGRUENCES if cap is None else cap
    cached = _LATTICE_CACHE.get(A.key)
    if cached is not None and len(cached) <= cap:
        return list(cached)
    n = A.size
    principal = {}
    for a in range(n):
        for b in range(a + 1, n):
            p = cg(A, [(a, b)])
            principal.setdefault(p.reps, p)
    atoms = list(principal.values())
    bottom = Partition.identity(n)
    found = {bottom.reps: bottom}
    for p in atoms:
        found.setdefault(p.reps, p)
    frontier = list(found.values())
    while frontier:
        nxt = []
        for x in frontier:
            for p in atoms:
                y = join(x, p)
                if y.reps not in found:
                    found[y.reps] = y
                    nxt.append(y)
                    if len(found) > cap:
                        raise CapacityExceeded(
                            f"congruence lattice exceeds cap of {cap} elements")
        frontier = nxt
    if len(found) > cap:
        raise CapacityExceeded(f"congruence lattice exceeds cap of {cap} elements")
    result = sorted(found.values(), key=Partition.sort_key)
    _LATTICE_CACHE[A.key] = result
    return list(result)


# --- relational term evaluation --------------------------------------------

def eval_relterm(A: FiniteAlgebra, t: RelTerm, assignment: Mapping[str, object]):
    """Evaluate ``t`` with variables bound to relations or partitions.

    Joins and commutators require their operands to evaluate to congruences
    of ``A``.  Results that are partitions are returned as :class:`Partition`,
    everything else as :class:`BinRel`.
    """
    from .commutator import commutator

    memo = {}
    congruence_ok = {}

    def as_congruence(value, sub):
        p = value if isinstance(value, Partition) else None
        if p is None:
            if not value.is_equivalence():
                raise OperandNotCongruence(
                    f"operand {render(sub)} is not an equivalence relation", sub)
            p = value.as_partition()
        if p.reps not in congruence_ok:
            congruence_ok[p.reps] = is_congruence(A, p)
        if not congruence_ok[p.reps]:
            raise OperandNotCongruence(f"operand {render(sub)} is not a congruence of the algebra", sub)
        return p

    def ev(s):
        if s in memo:
            return memo[s]
        if isinstance(s, RVar):
            if s.name not in assignment:
                raise UnboundVariable(f"variable {s.name!r} is not assigned")
            out = assignment[s.name]
            if isinstance(out, (BinRel, Partition)) and out.size != A.size:
                raise SizeMismatch(f"value of {s.name!r} has size {out.size}, algebra has {A.size}")
        elif isinstance(s, Meet):
            out = meet(ev(s.left), ev(s.right))
        elif isinstance(s, Comp):
            left, right = ev(s.left), ev(s.right)
            out = compose(left, right)
            if isinstance(left, Partition) and isinstance(right, Partition) and left <= right:
                out = right
            elif isinstance(left, Partition) and isinstance(right, Partition) and right <= left:
                out = left
        elif isinstance(s, Join):
            out = join(as_congruence(ev(s.left), s.left), as_congruence(ev(s.right), s.right))
        elif isinstance(s, Comm):
            out = commutator(A, as_congruence(ev(s.left), s.left),
                             as_congruence(ev(s.right), s.right))
        else:
            raise TypeError(f"not a relational term: {s!r}")
        memo[s] = out
        return out

    return ev(t)


@dataclass
class InclusionVerdict:
    holds: bool
    witness: tuple[int, int] | None = None
    assignment: dict | None = None
    checked: int = 0

    def __bool__(self):
        return self.holds


def check_inclusion(A: FiniteAlgebra, p: RelTerm, q: RelTerm,
                    assignment: Mapping[str, object]) -> InclusionVerdict:
    """Does ``p <= q`` hold under ``assignment``?  Witness = least pair in p minus q."""
    left = _as_rel(eval_relterm(A, p, assignment))
    right = _as_rel(eval_relterm(A, q, assignment))
    diff = left.matrix & ~right.matrix
    if not diff.any():
        return InclusionVerdict(True, checked=1)
    a, b = np.argwhere(diff)[0]
    return InclusionVerdict(False, (int(a), int(b)), dict(assignment), 1)


def check_eq_exhaustive(A: FiniteAlgebra, p: RelTerm, q: RelTerm, v: int | None = None,
                        budget: int | None = None) -> InclusionVerdict:
    """Check ``p <= q`` for every assignment of congruences to the variables.

    Variables are taken in order of first occurrence in ``p`` then ``q``;
    ``v``, if given, must match their number.  Assignments run in
    lexicographic order over :func:`con_lattice`; the first failure wins.
    """
    names = variables(p) + [x for x in variables(q) if x not in variables(p)]
    if v is not None and v != len(names):
        raise ValueError(f"terms have {len(names)} variables, expected {v}")
    budget = config.MAX_ASSIGNMENTS if budget is None else budget
    lattice = con_lattice(A)
    required = len(lattice) ** len(names)
    if required > budget:
        raise BudgetExceeded(
            f"{required} assignments needed, budget is {budget}", required=required)
    checked = 0
    for combo in itertools.product(lattice, repeat=len(names)):
        assignment = dict(zip(names, combo))
        verdict = check_inclusion(A, p, q, assignment)
        checked += 1
        if not verdict.holds:
            verdict.checked = checked
            return verdict
    return InclusionVerdict(True, checked=checked)
