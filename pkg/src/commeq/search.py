"""Searching finite algebras for terms that satisfy height-one conditions.

Every equation side must be a variable or an unknown symbol applied to
variables.  For an unknown ``f`` only its values on the argument tuples that
actually occur matter; call that coordinate set ``C_f``.  The restrictions of
the ``r``-ary term operations of ``A`` to ``C_f`` form the subalgebra of
``A**C_f`` generated by the ``r`` restricted projections, so enumerating that
subpower enumerates every candidate for ``f``.  The equations then become
equality constraints between slices of candidate rows, solved by arc
consistency plus backtracking.  An exhausted search without budget overrun is
a proof that no terms exist.

Every prefix of the closure consists of genuine term operations, so the
search first runs on small prefixes and only grows them (geometrically, up
to the budget) while no solution has turned up.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import config
from .algebra import App, FiniteAlgebra, Var, _power_coords, max_var, substitute_term, term_table
from .errors import BudgetExceeded
from .kernels import power_closure
from .pixley_wille import COMMUTATOR, STANDARD, Equation, MalcevCondition


@dataclass
class ConditionWitness:
    terms: dict  # unknown name -> AlgTerm over the algebra's signature
    stats: dict = field(default_factory=dict)

    def __getitem__(self, name):
        return self.terms[name]


class _Unsatisfiable(Exception):
    pass


def _side(t, proj):
    if isinstance(t, Var):
        return ("var", t.index)
    if isinstance(t, App) and all(isinstance(a, Var) for a in t.args):
        if t.symbol in proj:
            return ("var", t.args[proj[t.symbol] - 1].index)
        return ("app", t.symbol, tuple(a.index for a in t.args))
    raise ValueError(f"cannot search for {t}: sides must be variables or unknowns over variables")


def _bytes_rows(a: np.ndarray):
    a = np.ascontiguousarray(a)
    return [row.tobytes() for row in a]


class _Problem:
    def __init__(self, A: FiniteAlgebra, c: MalcevCondition, budget: int):
        self.A = A
        n = A.size
        proj = {name: p for name, _, p in c.symbols if p is not None}
        arity = {name: a for name, a, _ in c.symbols}
        self.unknowns = [name for name, _, p in c.symbols if p is None]
        occ_codes = {f: [] for f in self.unknowns}
        equations = []
        for eq in c.equations:
            if eq.flavor != STANDARD:
                raise ValueError("commutator-flavoured equations are verified, not searched")
            sides = [_side(eq.lhs, proj), _side(eq.rhs, proj)]
            used = sorted({i for s in sides for i in ([s[1]] if s[0] == "var" else s[2])})
            pos = {v: j for j, v in enumerate(used)}
            assign = _power_coords(n, len(used))
            resolved = []
            for s in sides:
                if s[0] == "var":
                    resolved.append(("var", assign[:, pos[s[1]]]))
                else:
                    name, args = s[1], s[2]
                    if name not in arity:
                        raise ValueError(f"unknown symbol {name!r} is not declared")
                    if len(args) != arity[name]:
                        raise ValueError(f"{name} has arity {arity[name]}, used with {len(args)}")
                    code = np.zeros(assign.shape[0], dtype=np.int64)
                    for v in args:
                        code = code * n + assign[:, pos[v]]
                    occ_codes[name].append(code)
                    resolved.append(("app", name, code))
            equations.append(resolved)

        # candidate rows per unknown
        self.coords = {}
        self.rows = {}
        self.parents = {}
        self.complete = True
        self.hit_steps = False
        sizes = {}
        names = A.signature.names
        tables = [A.tables[s] for s in names]
        arities = [A.signature.arity(s) for s in names]
        for f in self.unknowns:
            if occ_codes[f]:
                codes = np.unique(np.concatenate(occ_codes[f]))
            else:
                codes = np.zeros(0, dtype=np.int64)
            self.coords[f] = codes
            r = arity[f]
            if codes.size:
                digits = np.stack([(codes // n ** (r - 1 - j)) % n for j in range(r)])
            else:
                digits = np.zeros((r, 0), dtype=np.int64)
            if codes.size == 0:
                # unconstrained unknown: any term will do, take the first projection
                rows, parents, complete = np.zeros((1, 0), np.int32), np.array([[-1, 0]]), True
            else:
                rows, parents, complete = power_closure(n, codes.size, tables, arities, digits, budget,
                                                       config.MAX_CLOSURE_STEPS)
            self.complete &= bool(complete)
            if not complete and rows.shape[0] < budget:
                self.hit_steps = True
            self.rows[f] = rows
            self.parents[f] = parents
            sizes[f] = rows.shape[0]
        self.subpower_sizes = sizes

        # constraints
        self.alive = {f: np.ones(self.rows[f].shape[0], dtype=bool) for f in self.unknowns}
        self.binary = []  # (f, idx_f, g, idx_g)
        for (left, right) in equations:
            if left[0] == "var" and right[0] == "var":
                if not np.array_equal(left[1], right[1]):
                    raise _Unsatisfiable()
                continue
            if left[0] == "var":
                left, right = right, left
            f, idx_f = left[1], np.searchsorted(self.coords[left[1]], left[2])
            if right[0] == "var":
                self.alive[f] &= np.all(self.rows[f][:, idx_f] == right[1], axis=1)
            elif right[1] == f:
                idx_g = np.searchsorted(self.coords[f], right[2])
                self.alive[f] &= np.all(self.rows[f][:, idx_f] == self.rows[f][:, idx_g], axis=1)
            else:
                g, idx_g = right[1], np.searchsorted(self.coords[right[1]], right[2])
                self.binary.append((f, idx_f, g, idx_g))
        self.keys = []
        for f, idx_f, g, idx_g in self.binary:
            self.keys.append((_bytes_rows(self.rows[f][:, idx_f]), _bytes_rows(self.rows[g][:, idx_g])))

    def arc_consistency(self, alive) -> bool:
        changed = True
        while changed:
            changed = False
            for (f, _, g, _), (kf, kg) in zip(self.binary, self.keys):
                for x, kx, y, ky in ((f, kf, g, kg), (g, kg, f, kf)):
                    support = {ky[i] for i in np.flatnonzero(alive[y])}
                    for i in np.flatnonzero(alive[x]):
                        if kx[i] not in support:
                            alive[x][i] = False
                            changed = True
                    if not alive[x].any():
                        return False
        return True

    def solve(self, max_nodes: int):
        alive = {f: a.copy() for f, a in self.alive.items()}
        if any(not a.any() for a in alive.values()):
            return None, 0
        if not self.arc_consistency(alive):
            return None, 0
        nodes = 0
        order = sorted(self.unknowns, key=lambda f: (int(alive[f].sum()), self.unknowns.index(f)))

        def extend(depth, alive):
            nonlocal nodes
            if depth == len(order):
                return {}
            f = order[depth]
            for i in np.flatnonzero(alive[f]):
                nodes += 1
                if nodes > max_nodes:
                    raise BudgetExceeded(f"search exceeded {max_nodes} nodes")
                trial = {g: a.copy() for g, a in alive.items()}
                trial[f][:] = False
                trial[f][i] = True
                if not self.arc_consistency(trial):
                    continue
                rest = extend(depth + 1, trial)
                if rest is not None:
                    rest[f] = int(i)
                    return rest
            return None

        return extend(0, alive), nodes

    def term(self, f: str, index: int):
        parents = self.parents[f]
        names = self.A.signature.names
        memo = {}

        def build(e):
            if e in memo:
                return memo[e]
            op = int(parents[e, 0])
            if op == -1:
                t = Var(int(parents[e, 1]) + 1)
            elif op == -2:
                t = App(names[int(parents[e, 1])], ())
            else:
                r = self.A.signature.arity(names[op])
                t = App(names[op], tuple(build(int(a)) for a in parents[e, 1:1 + r]))
            memo[e] = t
            return t

        return build(index)


_FIRST_LEVEL = 4096


def find_condition_witness(A: FiniteAlgebra, c: MalcevCondition, budget: int | None = None,
                           max_nodes: int | None = None) -> ConditionWitness | None:
    """Terms of ``A`` satisfying every (standard) equation of ``c``.

    Returns None when the search space was exhausted (proven absent) and
    raises :class:`BudgetExceeded` when it was not.
    """
    budget = config.MAX_SUBPOWER if budget is None else budget
    max_nodes = config.MAX_SEARCH_NODES if max_nodes is None else max_nodes
    level = min(budget, _FIRST_LEVEL)
    while True:
        try:
            problem = _Problem(A, c, level)
        except _Unsatisfiable:
            return None
        solution, nodes = problem.solve(max_nodes)
        if solution is not None:
            terms = {f: problem.term(f, solution[f]) for f in problem.unknowns}
            stats = {"subpower_sizes": problem.subpower_sizes, "nodes": nodes,
                     "complete": problem.complete}
            return ConditionWitness(terms, stats)
        if problem.complete:
            return None
        if level >= budget or problem.hit_steps:
            raise BudgetExceeded(
                f"candidate sets exceed the budget ({budget} elements, "
                f"{config.MAX_CLOSURE_STEPS} operation steps) without a solution",
                required=None)
        level = min(budget, level * 8)


def subpower_sizes(A: FiniteAlgebra, c: MalcevCondition, budget: int | None = None) -> dict:
    """Sizes of the candidate sets the search would enumerate.

    Raises :class:`BudgetExceeded` if some set is larger than ``budget``.
    """
    budget = config.MAX_SUBPOWER if budget is None else budget
    try:
        problem = _Problem(A, c, budget)
        if not problem.complete:
            raise BudgetExceeded(f"a candidate set exceeds {budget} elements", required=None)
        return problem.subpower_sizes
    except _Unsatisfiable:
        return {}


def instantiate(t, c: MalcevCondition, terms: dict):
    """Replace unknown and projection symbols in ``t`` by concrete terms."""
    proj = {name: p for name, _, p in c.symbols if p is not None}
    if isinstance(t, Var):
        return t
    args = tuple(instantiate(a, c, terms) for a in t.args)
    if t.symbol in proj:
        return args[proj[t.symbol] - 1]
    if t.symbol in terms:
        return substitute_term(terms[t.symbol], {j + 1: a for j, a in enumerate(args)})
    return App(t.symbol, args)


@dataclass
class WitnessCheck:
    holds: bool
    equation: Equation | None = None
    detail: object = None

    def __bool__(self):
        return self.holds


def verify_witness(A: FiniteAlgebra, c: MalcevCondition, terms: dict) -> WitnessCheck:
    """Re-check every equation of ``c`` with ``terms`` substituted, by evaluation.

    Standard equations must hold on all assignments; commutator equations are
    checked with :func:`commeq.checks.check_commutator_eq`.
    """
    from .checks import check_commutator_eq

    terms = dict(getattr(terms, "terms", terms))
    for eq in c.equations:
        lhs, rhs = instantiate(eq.lhs, c, terms), instantiate(eq.rhs, c, terms)
        if eq.flavor == COMMUTATOR:
            verdict = check_commutator_eq(A, lhs, rhs)
            if not verdict.holds:
                return WitnessCheck(False, eq, verdict)
            continue
        m = max(max_var(lhs), max_var(rhs), 1)
        diff = np.flatnonzero(term_table(A, lhs, m) != term_table(A, rhs, m))
        if diff.size:
            coords = _power_coords(A.size, m)[diff[0]]
            return WitnessCheck(False, eq, tuple(int(x) for x in coords))
    return WitnessCheck(True)


OLSAK_PATTERNS = ("xyyyxx", "yxyxyx", "yyxxxy")


def olsak_condition(idempotent: bool = False) -> MalcevCondition:
    """``t(x,y,y,y,x,x) = t(y,x,y,x,y,x) = t(y,y,x,x,x,y)``, x = x1, y = x2."""
    def pattern(word):
        return App("t", tuple(Var(1 if ch == "x" else 2) for ch in word))

    eqs = [Equation(pattern(OLSAK_PATTERNS[0]), pattern(OLSAK_PATTERNS[1])),
           Equation(pattern(OLSAK_PATTERNS[1]), pattern(OLSAK_PATTERNS[2]))]
    if idempotent:
        eqs.append(Equation(App("t", (Var(1),) * 6), Var(1)))
    return MalcevCondition(2, (("t", 6, None),), tuple(eqs))


def has_olsak_term(A: FiniteAlgebra, budget: int | None = None, idempotent: bool = False):
    """``(True, witness)`` or ``(False, None)``; BudgetExceeded if undecided."""
    w = find_condition_witness(A, olsak_condition(idempotent), budget)
    return (w is not None), w
