"""Finite algebras given by explicit operation tables.

The universe of an algebra of size ``n`` is always ``0..n-1``.  An operation
of arity ``r`` is stored as a flat table of ``n**r`` values in row-major
(lexicographic) order of its argument tuples, i.e. ``f(a_1, ..., a_r)`` lives
at index ``a_1*n**(r-1) + ... + a_r``.
"""
from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import config
from .errors import (
    CapacityExceeded,
    InvalidAlgebra,
    InvalidSize,
    NotACongruence,
    TermSyntaxError,
    UnboundSymbol,
)
from .kernels import power_closure

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class Signature:
    symbols: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        names = [name for name, _ in self.symbols]
        if len(set(names)) != len(names):
            raise InvalidAlgebra(f"duplicate operation names in {names}")
        for name, arity in self.symbols:
            if not _IDENT.match(name):
                raise InvalidAlgebra(f"invalid operation name {name!r}")
            if arity < 0:
                raise InvalidAlgebra(f"negative arity for {name!r}")

    def __iter__(self):
        return iter(self.symbols)

    def __len__(self):
        return len(self.symbols)

    def arity(self, name: str) -> int:
        for sym, arity in self.symbols:
            if sym == name:
                return arity
        raise UnboundSymbol(f"unknown operation symbol {name!r}")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.symbols)


class FiniteAlgebra:
    """An algebra on ``0..size-1`` with total operation tables.

    ``tables`` maps each symbol to something reshapeable to a flat array of
    ``size**arity`` values.  Tables are copied and frozen.  ``aliases`` maps
    presentation names (``a``, ``b``, ``c1``...) to elements; the math never
    looks at them.
    """

    def __init__(self, size: int, signature: Signature | Sequence[tuple[str, int]] = (),
                 tables: Mapping[str, Iterable[int]] | None = None,
                 aliases: Mapping[str, int] | None = None):
        if size < 1:
            raise InvalidSize(f"algebra size must be positive, got {size}")
        if not isinstance(signature, Signature):
            signature = Signature(tuple((str(n), int(a)) for n, a in signature))
        tables = dict(tables or {})
        self.size = int(size)
        self.signature = signature
        frozen = {}
        for name, arity in signature:
            if name not in tables:
                raise InvalidAlgebra(f"missing table for {name!r}")
            tab = np.asarray(tables.pop(name), dtype=np.int64).ravel()
            if tab.shape[0] != self.size ** arity:
                raise InvalidAlgebra(
                    f"table for {name!r} has {tab.shape[0]} entries, expected {self.size ** arity}")
            if tab.size and (tab.min() < 0 or tab.max() >= self.size):
                raise InvalidAlgebra(f"table for {name!r} has values outside 0..{self.size - 1}")
            tab.setflags(write=False)
            frozen[name] = tab
        if tables:
            raise InvalidAlgebra(f"tables given for undeclared symbols {sorted(tables)}")
        self.tables: dict[str, np.ndarray] = frozen
        self.aliases: dict[str, int] = dict(aliases or {})
        for name, value in self.aliases.items():
            if not 0 <= value < self.size:
                raise InvalidAlgebra(f"alias {name}={value} out of range")
        self._key = None

    def __repr__(self):
        ops = ", ".join(f"{n}/{a}" for n, a in self.signature)
        return f"FiniteAlgebra(size={self.size}, ops=[{ops}])"

    @property
    def key(self) -> bytes:
        """Value digest used for hashing and caches."""
        if self._key is None:
            h = hashlib.blake2b(digest_size=16)
            h.update(str(self.size).encode())
            for name, arity in self.signature:
                h.update(f"|{name}/{arity}|".encode())
                h.update(self.tables[name].tobytes())
            self._key = h.digest()
        return self._key

    def __eq__(self, other):
        return isinstance(other, FiniteAlgebra) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def table(self, name: str) -> np.ndarray:
        """The table of ``name`` as an ``arity``-dimensional array."""
        arity = self.signature.arity(name)
        return self.tables[name].reshape((self.size,) * arity)

    def op(self, name: str, *args: int) -> int:
        arity = self.signature.arity(name)
        if len(args) != arity:
            raise ValueError(f"{name} takes {arity} arguments, got {len(args)}")
        idx = 0
        for a in args:
            idx = idx * self.size + a
        return int(self.tables[name][idx])

    def operations(self):
        """Yield ``(name, arity, flat_table)`` in signature order."""
        for name, arity in self.signature:
            yield name, arity, self.tables[name]

    def alias_of(self, element: int) -> str:
        for name, value in self.aliases.items():
            if value == element:
                return name
        return str(element)


def make_set_algebra(n: int) -> FiniteAlgebra:
    """The algebra on ``n`` elements with no basic operations."""
    if n < 1:
        raise InvalidSize(f"algebra size must be positive, got {n}")
    return FiniteAlgebra(n)


def encode(coords: Sequence[int], n: int) -> int:
    """Mixed-radix code of a tuple, coordinate 0 most significant."""
    code = 0
    for c in coords:
        code = code * n + c
    return code


def decode(code: int, n: int, k: int) -> tuple[int, ...]:
    coords = []
    for _ in range(k):
        code, c = divmod(code, n)
        coords.append(c)
    return tuple(reversed(coords))


def _power_coords(n: int, k: int) -> np.ndarray:
    """All ``k``-tuples over ``0..n-1`` in code order, shape ``(n**k, k)``."""
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.meshgrid(*([np.arange(n)] * k), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def product(A: FiniteAlgebra, k: int) -> FiniteAlgebra:
    """The direct power ``A**k`` with mixed-radix element codes."""
    if k < 1:
        raise InvalidSize(f"power exponent must be positive, got {k}")
    N = A.size ** k
    if N > config.MAX_UNIVERSE:
        raise CapacityExceeded(f"A^{k} has {N} elements, cap is {config.MAX_UNIVERSE}")
    entries = sum(N ** arity for _, arity in A.signature)
    if entries > config.MAX_TABLE_ENTRIES:
        raise CapacityExceeded(f"A^{k} needs {entries} table entries, cap is {config.MAX_TABLE_ENTRIES}")
    coords = _power_coords(A.size, k)  # element code -> coordinates
    tables = {}
    for name, arity, tab in A.operations():
        if arity == 0:
            tables[name] = [encode([int(tab[0])] * k, A.size)]
            continue
        code = np.zeros((N,) * arity, dtype=np.int64)
        for c in range(k):
            idx = np.zeros((1,) * arity, dtype=np.int64)
            for j in range(arity):
                shape = [1] * arity
                shape[j] = N
                idx = idx * A.size + coords[:, c].reshape(shape)
            code = code * A.size + tab[idx]
        tables[name] = code.ravel()
    return FiniteAlgebra(N, A.signature, tables)


def quotient(A: FiniteAlgebra, theta) -> FiniteAlgebra:
    """``A/theta`` with class ``i`` the i-th class by least member."""
    from .relations import Partition

    if not isinstance(theta, Partition):
        raise TypeError("quotient expects a Partition")
    if theta.size != A.size:
        raise InvalidAlgebra("partition size does not match algebra")
    violation = compatibility_violation(A, theta)
    if violation is not None:
        name, args = violation
        raise NotACongruence(
            f"partition is not compatible with {name} at arguments {args}", name, args)
    reps = sorted(set(theta.reps))
    cls = np.array([reps.index(r) for r in theta.reps], dtype=np.int64)
    m = len(reps)
    rep_arr = np.array(reps, dtype=np.int64)
    tables = {}
    for name, arity, tab in A.operations():
        args = _power_coords(m, arity)
        flat = np.zeros(args.shape[0], dtype=np.int64)
        for j in range(arity):
            flat = flat * A.size + rep_arr[args[:, j]]
        tables[name] = cls[tab[flat]] if arity else cls[tab]
    aliases = {name: int(cls[v]) for name, v in A.aliases.items()}
    return FiniteAlgebra(m, A.signature, tables, aliases)


def compatibility_violation(A: FiniteAlgebra, theta):
    """First ``(symbol, args)`` where ``theta`` fails to be compatible, or None.

    Checks one coordinate change at a time, which suffices for equivalences.
    """
    labels = np.asarray(theta.reps, dtype=np.int64)
    n = A.size
    for name, arity, tab in A.operations():
        if arity == 0:
            continue
        t = tab.reshape((n,) * arity)
        for pos in range(arity):
            moved = np.moveaxis(t, pos, 0)  # axis 0 is the varied position
            for a in range(n):
                b = int(labels[a])
                if b == a:
                    continue
                bad = labels[moved[a]] != labels[moved[b]]
                if bad.any():
                    rest = tuple(int(x) for x in np.argwhere(bad)[0])
                    args = rest[:pos] + (a,) + rest[pos:]
                    return name, args
    return None


def subuniverse_generate(A: FiniteAlgebra, seed: Iterable[int]) -> list[int]:
    """Least subuniverse containing ``seed``, in BFS discovery order."""
    seed = list(dict.fromkeys(int(s) for s in seed))
    for s in seed:
        if not 0 <= s < A.size:
            raise ValueError(f"seed element {s} outside universe")
    names = [name for name, _ in A.signature]
    elems, _, _ = power_closure(
        A.size, 1, [A.tables[n] for n in names], [A.signature.arity(n) for n in names],
        np.array(seed, dtype=np.int32).reshape(-1, 1), A.size + 1)
    return [int(e) for e in elems[:, 0]]


# --- algebraic terms ------------------------------------------------------

@dataclass(frozen=True)
class Var:
    index: int  # 1-based

    def __str__(self):
        return f"x{self.index}"


@dataclass(frozen=True)
class App:
    symbol: str
    args: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))

    def __str__(self):
        return f"{self.symbol}({','.join(str(a) for a in self.args)})"


AlgTerm = Var | App


def term_vars(t: AlgTerm) -> set[int]:
    if isinstance(t, Var):
        return {t.index}
    out = set()
    for a in t.args:
        out |= term_vars(a)
    return out


def max_var(t: AlgTerm) -> int:
    return max(term_vars(t), default=0)


def term_symbols(t: AlgTerm) -> set[str]:
    if isinstance(t, Var):
        return set()
    out = {t.symbol}
    for a in t.args:
        out |= term_symbols(a)
    return out


def substitute_term(t: AlgTerm, mapping: Mapping[int, AlgTerm]) -> AlgTerm:
    """Replace variable ``xi`` by ``mapping[i]`` simultaneously."""
    if isinstance(t, Var):
        return mapping.get(t.index, t)
    return App(t.symbol, tuple(substitute_term(a, mapping) for a in t.args))


def eval_term(A: FiniteAlgebra, t: AlgTerm, assignment: Sequence[int]) -> int:
    if isinstance(t, Var):
        if t.index > len(assignment):
            raise ValueError(f"assignment too short for x{t.index}")
        return int(assignment[t.index - 1])
    if t.symbol not in A.tables:
        raise UnboundSymbol(f"symbol {t.symbol!r} is not in the signature")
    arity = A.signature.arity(t.symbol)
    if arity != len(t.args):
        raise ValueError(f"{t.symbol} has arity {arity}, applied to {len(t.args)} arguments")
    idx = 0
    for a in t.args:
        idx = idx * A.size + eval_term(A, a, assignment)
    return int(A.tables[t.symbol][idx])


def term_table(A: FiniteAlgebra, t: AlgTerm, arity: int) -> np.ndarray:
    """Values of ``t`` on all of ``A**arity`` in code order (vectorized)."""
    coords = _power_coords(A.size, arity)
    memo = {}

    def ev(s):
        if s in memo:
            return memo[s]
        if isinstance(s, Var):
            if s.index > arity:
                raise ValueError(f"term uses x{s.index} but arity is {arity}")
            out = coords[:, s.index - 1]
        else:
            if s.symbol not in A.tables:
                raise UnboundSymbol(f"symbol {s.symbol!r} is not in the signature")
            if A.signature.arity(s.symbol) != len(s.args):
                raise ValueError(f"{s.symbol} applied to {len(s.args)} arguments")
            flat = np.zeros(coords.shape[0], dtype=np.int64)
            for a in s.args:
                flat = flat * A.size + ev(a)
            out = A.tables[s.symbol][flat]
        memo[s] = out
        return out

    return ev(t)


_TOKEN = re.compile(r"\s*(?:([A-Za-z_][A-Za-z0-9_]*)|(.))")


def parse_algterm(text: str) -> AlgTerm:
    """Parse ``plus(x1,neg(x2))``-style terms.

    ``x<digits>`` is a variable; any other identifier is an operation symbol,
    written ``f(...)`` or bare for constants.
    """
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m.group(0).strip() == "":
            break
        start = m.start(1) if m.group(1) else m.start(2)
        tokens.append((m.group(1) or m.group(2), start))
        pos = m.end()
    if not tokens:
        raise TermSyntaxError("empty term", 0)
    i = 0

    def expect(ch):
        nonlocal i
        if i >= len(tokens) or tokens[i][0] != ch:
            where = tokens[i][1] if i < len(tokens) else len(text)
            raise TermSyntaxError(f"expected {ch!r}", where)
        i += 1

    def term():
        nonlocal i
        if i >= len(tokens):
            raise TermSyntaxError("unexpected end of term", len(text))
        tok, where = tokens[i]
        if not _IDENT.match(tok):
            raise TermSyntaxError(f"unexpected {tok!r}", where)
        i += 1
        if re.fullmatch(r"x[0-9]+", tok) and not (i < len(tokens) and tokens[i][0] == "("):
            index = int(tok[1:])
            if index < 1:
                raise TermSyntaxError("variable indices start at 1", where)
            return Var(index)
        if i < len(tokens) and tokens[i][0] == "(":
            i += 1
            args = []
            if i < len(tokens) and tokens[i][0] == ")":
                i += 1
                return App(tok, ())
            while True:
                args.append(term())
                if i < len(tokens) and tokens[i][0] == ",":
                    i += 1
                    continue
                expect(")")
                return App(tok, tuple(args))
        return App(tok, ())

    t = term()
    if i != len(tokens):
        raise TermSyntaxError(f"trailing input {tokens[i][0]!r}", tokens[i][1])
    return t
