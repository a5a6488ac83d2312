"""Plain-text algebra files.

::

    # Z4
    size 4
    alias zero=0 one=1
    op plus 2
    0 1 2 3 1 2 3 0 2 3 0 1 3 0 1 2
    op neg 1
    0 3 2 1

Table values follow their ``op`` line in row-major order and may span any
number of lines.  ``#`` starts a comment.  :func:`print_algebra` writes the
canonical form (one line per table), which parses back to the same bytes.
"""
from __future__ import annotations

import re

from .algebra import FiniteAlgebra
from .errors import AlgebraFileError, CommeqError

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def _int(tok, lineno, what):
    try:
        value = int(tok)
    except ValueError:
        raise AlgebraFileError(f"expected {what}, got {tok!r}", line=lineno) from None
    if value < 0:
        raise AlgebraFileError(f"{what} must be non-negative", line=lineno)
    return value


def parse_algebra_file(text: str) -> FiniteAlgebra:
    size = None
    aliases: dict[str, int] = {}
    ops: list[list] = []  # [name, arity, values, lineno]
    for lineno, raw in enumerate(text.splitlines(), start=1):
        words = raw.split("#", 1)[0].split()
        if not words:
            continue
        head = words[0]
        if head == "size":
            if size is not None:
                raise AlgebraFileError("duplicate size line", line=lineno)
            if len(words) != 2:
                raise AlgebraFileError("expected 'size N'", line=lineno)
            size = _int(words[1], lineno, "a size")
            if size < 1:
                raise AlgebraFileError("size must be positive", line=lineno)
        elif head == "alias":
            if size is None:
                raise AlgebraFileError("alias before size", line=lineno)
            for item in words[1:]:
                name, eq, value = item.partition("=")
                if not eq or not _NAME.match(name):
                    raise AlgebraFileError(f"bad alias {item!r}", line=lineno)
                if name in aliases:
                    raise AlgebraFileError(f"alias {name!r} given twice", line=lineno)
                idx = _int(value, lineno, "an element index")
                if idx >= size:
                    raise AlgebraFileError(
                        f"alias {name}={idx} outside 0..{size - 1}", line=lineno)
                aliases[name] = idx
        elif head == "op":
            if size is None:
                raise AlgebraFileError("op before size", line=lineno)
            if len(words) != 3 or not _NAME.match(words[1]):
                raise AlgebraFileError("expected 'op NAME ARITY'", line=lineno)
            if any(o[0] == words[1] for o in ops):
                raise AlgebraFileError(f"operation {words[1]!r} defined twice",
                                       line=lineno)
            ops.append([words[1], _int(words[2], lineno, "an arity"), [], lineno])
        else:
            if not ops:
                raise AlgebraFileError(f"unexpected {head!r}", line=lineno)
            name, arity, values, _ = ops[-1]
            for tok in words:
                v = _int(tok, lineno, "a table value")
                if v >= size:
                    raise AlgebraFileError(
                        f"value {v} of {name} outside 0..{size - 1}", line=lineno)
                values.append(v)
            if len(values) > size ** arity:
                raise AlgebraFileError(
                    f"too many values for {name} (expected {size ** arity})",
                    line=lineno)
    if size is None:
        raise AlgebraFileError("missing 'size' line", line=None)
    for name, arity, values, lineno in ops:
        if len(values) != size ** arity:
            raise AlgebraFileError(
                f"{name} has {len(values)} values, expected {size ** arity}",
                line=lineno)
    try:
        return FiniteAlgebra(size, [(o[0], o[1]) for o in ops], {o[0]: o[2] for o in ops},
                             aliases=aliases)
    except CommeqError as exc:
        raise AlgebraFileError(str(exc), line=None) from exc


def print_algebra(A: FiniteAlgebra) -> str:
    lines = [f"size {A.size}"]
    if A.aliases:
        lines.append("alias " + " ".join(f"{k}={v}" for k, v in A.aliases.items()))
    for name, arity, table in A.operations():
        lines.append(f"op {name} {arity}")
        lines.append(" ".join(str(int(v)) for v in table))
    return "\n".join(lines) + "\n"


def read_algebra(path) -> FiniteAlgebra:
    with open(path, encoding="utf-8") as fh:
        return parse_algebra_file(fh.read())


def write_algebra(A: FiniteAlgebra, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(print_algebra(A))
