"""Labelled graphs of {meet, composition}-terms.

Starting from the single edge ``x1 -> x2`` labelled with the whole term, an
edge labelled ``u ^ v`` is split into two parallel edges and an edge labelled
``u o v`` into a path through a fresh vertex, until every label is a
variable.  Vertices are numbered 1, 2, ... with 1 and 2 the endpoints and new
vertices numbered in creation order.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import RequiresJoinFree, UnboundVariable
from .relations import BinRel, Partition
from .terms import Comp, Meet, RelTerm, RVar, render


@dataclass(frozen=True)
class Edge:
    source: int
    target: int
    label: RelTerm  # an RVar in final graphs


@dataclass(frozen=True)
class LabelledGraph:
    vertices: int
    edges: tuple[Edge, ...]

    def is_final(self) -> bool:
        return all(isinstance(e.label, RVar) for e in self.edges)

    def labels(self) -> list[str]:
        out = []
        for e in self.edges:
            if e.label.name not in out:
                out.append(e.label.name)
        return out

    def dump(self) -> str:
        return "\n".join(f"x{e.source} -{render(e.label)}-> x{e.target}" for e in self.edges)

    def to_dot(self, name: str = "G") -> str:
        lines = [f"digraph {name} {{"]
        for v in range(1, self.vertices + 1):
            shape = "doublecircle" if v <= 2 else "circle"
            lines.append(f'  x{v} [shape={shape}];')
        for e in self.edges:
            label = render(e.label).replace('"', r'\"')
            lines.append(f'  x{e.source} -> x{e.target} [label="{label}"];')
        lines.append("}")
        return "\n".join(lines)


def _check_term(p: RelTerm):
    if isinstance(p, RVar):
        return
    if not isinstance(p, (Meet, Comp)):
        raise RequiresJoinFree(
            f"graph construction needs a {{^, o}}-term, found {type(p).__name__.lower()} in {render(p)}")
    _check_term(p.left)
    _check_term(p.right)


def build_graph(p: RelTerm, trace: bool = False, order: str = "leftmost"):
    """``G(p)``; with ``trace`` also the list of intermediate graphs ``G_1..G_n``.

    ``order="leftmost"`` rewrites the first non-variable edge of the edge list
    each step; ``"rightmost"`` the last one (used to test order independence).
    """
    _check_term(p)
    edges = [Edge(1, 2, p)]
    k = 2
    history = [LabelledGraph(k, tuple(edges))] if trace else None
    while True:
        pending = [i for i, e in enumerate(edges) if not isinstance(e.label, RVar)]
        if not pending:
            break
        i = pending[0] if order == "leftmost" else pending[-1]
        e = edges[i]
        w = e.label
        if isinstance(w, Meet):
            edges[i:i + 1] = [Edge(e.source, e.target, w.left), Edge(e.source, e.target, w.right)]
        else:
            k += 1
            edges[i:i + 1] = [Edge(e.source, k, w.left), Edge(k, e.target, w.right)]
        if trace:
            history.append(LabelledGraph(k, tuple(edges)))
    g = LabelledGraph(k, tuple(edges))
    return (g, history) if trace else g


def _relation_matrices(G: LabelledGraph, relations: Mapping[str, object]):
    mats = {}
    for name in G.labels():
        if name not in relations:
            raise UnboundVariable(f"label {name!r} has no relation")
        r = relations[name]
        mats[name] = (r.rel if isinstance(r, Partition) else r).matrix
    return mats


class _Solver:
    """Arc consistency plus backtracking for one labelled graph."""

    def __init__(self, G: LabelledGraph, mats, n):
        self.G = G
        self.n = n
        self.arcs = []  # (u, v, matrix) meaning (val(u), val(v)) in matrix
        for e in G.edges:
            m = mats[e.label.name]
            self.arcs.append((e.source, e.target, m))
            self.arcs.append((e.target, e.source, m.T))
        self.neighbours = {v: [] for v in range(1, G.vertices + 1)}
        for idx, (u, v, _) in enumerate(self.arcs):
            self.neighbours[v].append(idx)

    def propagate(self, domains) -> bool:
        queue = list(range(len(self.arcs)))
        queued = set(queue)
        while queue:
            idx = queue.pop(0)
            queued.discard(idx)
            u, v, m = self.arcs[idx]
            supported = domains[u] & m[:, domains[v]].any(axis=1)
            if not np.array_equal(supported, domains[u]):
                domains[u] = supported
                if not supported.any():
                    return False
                for nxt in self.neighbours[u]:
                    if nxt not in queued:
                        queue.append(nxt)
                        queued.add(nxt)
        return True

    def solve(self, domains):
        """Lexicographically least full assignment, or None."""
        if not self.propagate(domains):
            return None
        for v in range(1, self.G.vertices + 1):
            vals = np.flatnonzero(domains[v])
            if len(vals) > 1:
                for a in vals:
                    trial = {w: d.copy() for w, d in domains.items()}
                    trial[v] = np.zeros(self.n, dtype=bool)
                    trial[v][a] = True
                    found = self.solve(trial)
                    if found is not None:
                        return found
                return None
        return {v: int(np.flatnonzero(domains[v])[0]) for v in domains}


def _initial_domains(G, n, a1=None, a2=None):
    domains = {v: np.ones(n, dtype=bool) for v in range(1, G.vertices + 1)}
    for v, a in ((1, a1), (2, a2)):
        if a is not None:
            domains[v] = np.zeros(n, dtype=bool)
            domains[v][a] = True
    return domains


def witness_assignment(A, G: LabelledGraph, relations: Mapping[str, object], pair):
    """Least vertex assignment extending ``x1 -> a1, x2 -> a2``, or None."""
    n = A.size if hasattr(A, "size") else int(A)
    mats = _relation_matrices(G, relations)
    a1, a2 = pair
    found = _Solver(G, mats, n).solve(_initial_domains(G, n, a1, a2))
    if found is None:
        return None
    return tuple(found[v] for v in range(1, G.vertices + 1))


def evaluate_via_graph(A, G: LabelledGraph, relations: Mapping[str, object]) -> BinRel:
    """Endpoint pairs admitting an edge-respecting vertex assignment."""
    n = A.size if hasattr(A, "size") else int(A)
    mats = _relation_matrices(G, relations)
    solver = _Solver(G, mats, n)
    out = np.zeros((n, n), dtype=bool)
    base = _initial_domains(G, n)
    if not solver.propagate(base):
        return BinRel(n, out)
    for a1 in np.flatnonzero(base[1]):
        start = {v: d.copy() for v, d in base.items()}
        start[1] = np.zeros(n, dtype=bool)
        start[1][a1] = True
        if not solver.propagate(start):
            continue
        for a2 in np.flatnonzero(start[2]):
            trial = {v: d.copy() for v, d in start.items()}
            trial[2] = np.zeros(n, dtype=bool)
            trial[2][a2] = True
            if solver.solve(trial) is not None:
                out[a1, a2] = True
    return BinRel(n, out)


def graphs_isomorphic(G: LabelledGraph, H: LabelledGraph) -> bool:
    """Isomorphism fixing x1 and x2 and preserving labels (brute force)."""
    if G.vertices != H.vertices or len(G.edges) != len(H.edges):
        return False
    target = sorted((e.source, e.target, render(e.label)) for e in H.edges)
    inner = list(range(3, G.vertices + 1))
    for perm in itertools.permutations(inner):
        f = {1: 1, 2: 2, **dict(zip(inner, perm))}
        mapped = sorted((f[e.source], f[e.target], render(e.label)) for e in G.edges)
        if mapped == target:
            return True
    return False
