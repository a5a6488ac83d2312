"""Relational terms over meet, composition, join and commutator.

Grammar for :func:`parse_relterm` (whitespace is insignificant)::

    join  := comp (("v" | "+") comp)*
    comp  := meet (("o" | ".") meet)*
    meet  := atom ("^" atom)*
    atom  := VAR | "(" join ")" | "[" join "," join "]"
    VAR   := letter (letter | digit | "_")*   -- except the words "o" and "v"

All binary operators are left-associative; meet binds tightest.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping

from .errors import TermSyntaxError, UnboundVariable


class RelTerm:
    __slots__ = ()

    def __str__(self):
        return render(self)


@dataclass(frozen=True)
class RVar(RelTerm):
    name: str


@dataclass(frozen=True)
class Meet(RelTerm):
    left: RelTerm
    right: RelTerm


@dataclass(frozen=True)
class Comp(RelTerm):
    left: RelTerm
    right: RelTerm


@dataclass(frozen=True)
class Join(RelTerm):
    left: RelTerm
    right: RelTerm


@dataclass(frozen=True)
class Comm(RelTerm):
    left: RelTerm
    right: RelTerm


_PREC = {Join: 1, Comp: 2, Meet: 3}
_SYM = {Join: "v", Comp: "o", Meet: "^"}


def render(t: RelTerm) -> str:
    """Inverse of :func:`parse_relterm` with minimal parentheses."""
    if isinstance(t, RVar):
        return t.name
    if isinstance(t, Comm):
        return f"[{render(t.left)},{render(t.right)}]"
    prec = _PREC[type(t)]
    left = render(t.left)
    if type(t.left) in _PREC and _PREC[type(t.left)] < prec:
        left = f"({left})"
    right = render(t.right)
    if type(t.right) in _PREC and _PREC[type(t.right)] <= prec:
        right = f"({right})"
    return f"{left} {_SYM[type(t)]} {right}"


_TOKEN = re.compile(r"\s*(?:([A-Za-z][A-Za-z0-9_]*)|([\^o.v+()\[\],]))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            raise TermSyntaxError(f"unexpected character {text[pos]!r}", pos)
        if m.group(1):
            word = m.group(1)
            kind = "op" if word in ("o", "v") else "var"
            tokens.append((kind, word, m.start(1)))
        else:
            tokens.append(("op", m.group(2), m.start(2)))
        pos = m.end()
    return tokens


def parse_relterm(text: str) -> RelTerm:
    tokens = _tokenize(text)
    if not tokens:
        raise TermSyntaxError("empty term", 0)
    pos = 0

    def peek():
        return tokens[pos][1] if pos < len(tokens) and tokens[pos][0] == "op" else None

    def where():
        return tokens[pos][2] if pos < len(tokens) else len(text)

    def binary(sub, ops, node):
        nonlocal pos
        left = sub()
        while peek() in ops:
            pos += 1
            left = node(left, sub())
        return left

    def join():
        return binary(comp, ("v", "+"), Join)

    def comp():
        return binary(meet, ("o", "."), Comp)

    def meet():
        return binary(atom, ("^",), Meet)

    def expect(sym):
        nonlocal pos
        if peek() != sym:
            raise TermSyntaxError(f"expected {sym!r}", where())
        pos += 1

    def atom():
        nonlocal pos
        if pos >= len(tokens):
            raise TermSyntaxError("unexpected end of term", len(text))
        kind, value, at = tokens[pos]
        if kind == "var":
            pos += 1
            return RVar(value)
        if value == "(":
            pos += 1
            inner = join()
            expect(")")
            return inner
        if value == "[":
            pos += 1
            left = join()
            expect(",")
            right = join()
            expect("]")
            return Comm(left, right)
        raise TermSyntaxError(f"unexpected {value!r}", at)

    t = join()
    if pos != len(tokens):
        raise TermSyntaxError(f"unexpected {tokens[pos][1]!r}", tokens[pos][2])
    return t


def variables(t: RelTerm) -> list[str]:
    """Variable names in order of first occurrence (left to right)."""
    out: list[str] = []

    def walk(s):
        if isinstance(s, RVar):
            if s.name not in out:
                out.append(s.name)
        else:
            walk(s.left)
            walk(s.right)

    walk(t)
    return out


def count_nodes(t: RelTerm, kind) -> int:
    if isinstance(t, RVar):
        return 0
    return (type(t) is kind) + count_nodes(t.left, kind) + count_nodes(t.right, kind)


def is_join_free(t: RelTerm) -> bool:
    return count_nodes(t, Join) == 0


def is_commutator_free(t: RelTerm) -> bool:
    return count_nodes(t, Comm) == 0


def alternating(u: RelTerm, v: RelTerm, k: int) -> RelTerm:
    """``u o v o u o ...`` with exactly ``k`` factors, left-associated."""
    if k < 1:
        raise ValueError("k must be positive")
    out = u
    for i in range(1, k):
        out = Comp(out, v if i % 2 else u)
    return out


def expand_join(t: RelTerm, k: int) -> RelTerm:
    """Replace every join by the ``k``-fold alternating product, bottom-up."""
    if k < 1:
        raise ValueError("k must be positive")
    if isinstance(t, RVar):
        return t
    left, right = expand_join(t.left, k), expand_join(t.right, k)
    if isinstance(t, Join):
        return alternating(left, right, k)
    return type(t)(left, right)


def substitute(t: RelTerm, mapping: Mapping[str, RelTerm]) -> RelTerm:
    """Simultaneous substitution of variables."""
    if isinstance(t, RVar):
        if t.name not in mapping:
            raise UnboundVariable(f"no substitution for variable {t.name!r}")
        return mapping[t.name]
    return type(t)(substitute(t.left, mapping), substitute(t.right, mapping))


def herringbone(n: int, x: RelTerm | str = "x", y: RelTerm | str = "y",
                z: RelTerm | str = "z") -> RelTerm:
    """``y^n(x, y, z)`` with ``y^0 = y`` and ``y^(n+1) = y v (x ^ y^n(x, z, y))``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    x, y, z = (RVar(v) if isinstance(v, str) else v for v in (x, y, z))
    if n == 0:
        return y
    return Join(y, Meet(x, herringbone(n - 1, x, z, y)))


def big(op, terms):
    """Left-fold ``op`` over a non-empty list of terms."""
    terms = list(terms)
    if not terms:
        raise ValueError("empty fold")
    out = terms[0]
    for t in terms[1:]:
        out = op(out, t)
    return out
