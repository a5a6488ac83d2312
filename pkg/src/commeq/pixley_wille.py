"""Strong Mal'cev conditions from congruence inclusions ``p <= q``.

``G(p)`` has vertices ``x1..xn``; every vertex ``x_i`` of ``G(q)`` gets an
``n``-ary term ``t_i`` with ``t1 = x1`` and ``t2 = x2`` (the projections onto
the endpoints).  For each relation variable ``s`` and each ``s``-labelled
edge ``(x_i, x_j)`` of ``G(q)`` one equation is emitted,

    t_i(sigma_s(x1), .., sigma_s(xn))  ~  t_j(sigma_s(x1), .., sigma_s(xn)),

where ``sigma_s`` sends each variable to the least-index member of its class
in the equivalence generated by the ``s``-edges of ``G(p)``.  The relation
``~`` is equality for the standard condition and the commutator relation for
the commutator variant.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

from .algebra import App, Var, parse_algterm
from .errors import MissingK
from .graph import build_graph
from .terms import RelTerm, count_nodes, Comp, expand_join, is_join_free, variables

STANDARD = "standard"
COMMUTATOR = "commutator"


@dataclass(frozen=True)
class Equation:
    lhs: object  # AlgTerm
    rhs: object
    relvar: str | None = None
    flavor: str = STANDARD

    def render(self) -> str:
        sym = "≈_C" if self.flavor == COMMUTATOR else "≈"
        return f"{self.lhs} {sym} {self.rhs}"


@dataclass(frozen=True)
class MalcevCondition:
    """Equations over unknown symbols.

    ``symbols`` lists ``(name, arity, projection)``; ``projection`` is the
    1-based variable a symbol is bound to, or None for a genuine unknown.
    """
    n: int
    symbols: tuple[tuple[str, int, int | None], ...]
    equations: tuple[Equation, ...] = field(default=())

    @property
    def unknowns(self) -> list[tuple[str, int]]:
        return [(name, arity) for name, arity, proj in self.symbols if proj is None]

    def with_flavor(self, flavor: str) -> "MalcevCondition":
        return replace(self, equations=tuple(replace(e, flavor=flavor) for e in self.equations))


def edge_sets(p: RelTerm) -> dict[str, list[tuple[int, int]]]:
    """Label -> list of ``(i, j)`` for the edges ``(x_i, x_j)`` of ``G(p)``."""
    out: dict[str, list[tuple[int, int]]] = {}
    for e in build_graph(p).edges:
        out.setdefault(e.label.name, [])
        if (e.source, e.target) not in out[e.label.name]:
            out[e.label.name].append((e.source, e.target))
    return out


def transversal(pairs, n: int) -> tuple[int, ...]:
    """``sigma[i-1]`` = least index in the class of ``x_i`` under Eqv(pairs)."""
    parent = list(range(n + 1))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i, j in pairs:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    return tuple(find(i) for i in range(1, n + 1))


def _orient(lhs, rhs):
    # bare variables go on the right; otherwise keep edge direction
    if isinstance(lhs, Var) and not isinstance(rhs, Var):
        return rhs, lhs
    return lhs, rhs


def eq_standard(p: RelTerm, q: RelTerm, k: int | None = None,
                flavor: str = STANDARD) -> MalcevCondition:
    if not is_join_free(p):
        from .errors import RequiresJoinFree
        raise RequiresJoinFree("the left-hand side must be join-free")
    if not is_join_free(q):
        if k is None:
            raise MissingK("the right-hand side contains joins; supply k")
        q = expand_join(q, k)
    gp = build_graph(p)
    gq = build_graph(q)
    n = gp.vertices
    tp = edge_sets(p)

    symbols = [("t1", n, 1), ("t2", n, 2)]
    symbols += [(f"t{i}", n, None) for i in range(3, gq.vertices + 1)]

    def term_at(vertex, sigma):
        args = tuple(Var(sigma[i]) for i in range(n))
        if vertex == 1:
            return args[0]
        if vertex == 2:
            return args[1]
        return App(f"t{vertex}", args)

    # grouped by relation variable, in order of first occurrence in q
    relvars = variables(q)
    equations = []
    seen = set()
    for s in relvars:
        sigma = transversal(tp.get(s, []), n)
        for e in gq.edges:
            if e.label.name != s:
                continue
            lhs, rhs = _orient(term_at(e.source, sigma), term_at(e.target, sigma))
            if lhs == rhs:
                continue
            eq = Equation(lhs, rhs, s, flavor)
            if eq not in seen:
                seen.add(eq)
                equations.append(eq)
    return MalcevCondition(n, tuple(symbols), tuple(equations))


def eq_commutator(p: RelTerm, q: RelTerm, k: int | None = None) -> MalcevCondition:
    return eq_standard(p, q, k, flavor=COMMUTATOR)


def render(c: MalcevCondition, format: str = "text") -> str:
    if format == "text":
        return "\n".join(e.render() for e in c.equations)
    if format == "machine":
        return json.dumps(to_document(c), ensure_ascii=False, indent=2)
    raise ValueError(f"unknown format {format!r}")


def to_document(c: MalcevCondition) -> dict:
    return {
        "n": c.n,
        "symbols": [
            {"name": name, "arity": arity, "projection": proj}
            for name, arity, proj in c.symbols
        ],
        "equations": [
            {"lhs": str(e.lhs), "rhs": str(e.rhs), "relvar": e.relvar, "flavor": e.flavor}
            for e in c.equations
        ],
    }


def from_document(doc) -> MalcevCondition:
    """Inverse of :func:`to_document`; accepts a dict or JSON text."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    symbols = tuple((s["name"], int(s["arity"]), s.get("projection")) for s in doc["symbols"])
    equations = tuple(
        Equation(parse_algterm(e["lhs"]), parse_algterm(e["rhs"]), e.get("relvar"),
                 e.get("flavor", STANDARD))
        for e in doc["equations"])
    for e in equations:
        if e.flavor not in (STANDARD, COMMUTATOR):
            raise ValueError(f"unknown flavor {e.flavor!r}")
    return MalcevCondition(int(doc["n"]), symbols, equations)


def variable_count(p: RelTerm) -> int:
    return 2 + count_nodes(p, Comp)
