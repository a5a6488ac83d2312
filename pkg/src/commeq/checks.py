"""Commutator equations and instance checks of the Taylor and Pixley-Wille results."""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

import numpy as np

from . import config
from .algebra import FiniteAlgebra, _power_coords, make_set_algebra, max_var, term_table
from .commutator import commutator
from .errors import BudgetExceeded
from .relations import (
    InclusionVerdict,
    Partition,
    check_inclusion,
    eval_relterm,
    format_partition,
    con_lattice,
    join,
    meet,
)
from .terms import Comm, Comp, Join, Meet, RelTerm, RVar, big, herringbone, substitute, variables


@dataclass
class CommEqVerdict:
    holds: bool
    theta: Partition | None = None
    tuple: tuple | None = None
    checked: int = 0

    def __bool__(self):
        return self.holds


def check_commutator_eq(A: FiniteAlgebra, p, q, budget: int | None = None) -> CommEqVerdict:
    """``p ≈_C q``: for every congruence theta and every tuple inside one
    theta-class, the values of ``p`` and ``q`` are ``[theta, theta]``-related.

    Congruences are scanned in :func:`con_lattice` order, classes by least
    member and tuples lexicographically; the first failure is returned.
    """
    budget = config.MAX_TUPLES if budget is None else budget
    m = max(max_var(p), max_var(q))
    n = A.size
    lattice = con_lattice(A)
    total = sum(len(b) ** m for th in lattice for b in th.blocks())
    if total > budget or n ** m > budget:
        raise BudgetExceeded(f"{total} tuples to check, budget is {budget}", required=total)
    coords = _power_coords(n, m)
    pv, qv = term_table(A, p, m), term_table(A, q, m)
    if m == 0:
        pv, qv = np.broadcast_to(pv, (1,)), np.broadcast_to(qv, (1,))
    checked = 0
    for theta in lattice:
        lab = np.asarray(theta.reps)
        if m:
            inside = np.all(lab[coords] == lab[coords[:, :1]], axis=1)
        else:
            inside = np.ones(1, dtype=bool)
        checked += int(inside.sum()) if m else theta.num_blocks()
        if np.array_equal(pv, qv):
            continue
        comm = np.asarray(commutator(A, theta, theta).reps)
        bad = np.flatnonzero(inside & (comm[pv] != comm[qv]))
        if bad.size:
            if m:
                first = min(bad, key=lambda i: (lab[coords[i, 0]], i))
                witness = tuple(int(x) for x in coords[first])
            else:
                witness = ()
            return CommEqVerdict(False, theta, witness, checked)
    return CommEqVerdict(True, checked=checked)


@dataclass
class WeakDifferenceVerdict:
    holds: bool
    theta: Partition | None = None
    pair: tuple | None = None
    side: str | None = None  # "d(b,b,a)" or "d(a,b,b)"

    def __bool__(self):
        return self.holds


def check_weak_difference(A: FiniteAlgebra, d) -> WeakDifferenceVerdict:
    """``d(b,b,a) [θ,θ] a [θ,θ] d(a,b,b)`` for every congruence θ and (a,b) in θ."""
    n = A.size
    table = term_table(A, d, 3).reshape(n, n, n)
    for theta in con_lattice(A):
        comm = None
        for a, b in theta.rel.pairs():
            left, right = int(table[b, b, a]), int(table[a, b, b])
            if left == a and right == a:
                continue
            if comm is None:
                comm = commutator(A, theta, theta)
            if not comm.related(left, a):
                return WeakDifferenceVerdict(False, theta, (a, b), "d(b,b,a)")
            if not comm.related(a, right):
                return WeakDifferenceVerdict(False, theta, (a, b), "d(a,b,b)")
    return WeakDifferenceVerdict(True)


def check_idempotence(A: FiniteAlgebra, p):
    """``x ≈_C p(x,..,x)`` at the zero congruence: p(a,..,a) = a for all a.

    Returns ``(True, None)`` or ``(False, a)`` for the least failing ``a``.
    """
    m = max(max_var(p), 1)
    diag = np.array([sum(a * A.size ** j for j in range(m)) for a in range(A.size)])
    vals = term_table(A, p, m)[diag]
    bad = np.flatnonzero(vals != np.arange(A.size))
    return (True, None) if bad.size == 0 else (False, int(bad[0]))


# --- Taylor congruence equations -------------------------------------------

L_SETS = {1: ((1, 5, 6), (2, 3, 4)), 2: ((1, 5, 6), (2, 3, 4))}
R_SETS = {1: ((2, 4, 6), (1, 3, 5)), 2: ((3, 4, 5), (1, 2, 6))}


def _a(i):
    return RVar(f"a{i}")


def _b(i):
    return RVar(f"b{i}")


def _mixed_join(alphas, betas) -> RelTerm:
    return big(Join, [_a(j) for j in alphas] + [_b(j) for j in betas])


def taylor_terms(variant: str, n: int = 0):
    """``(lhs, rhs, parts)`` for the Taylor congruence equations.

    ``variant`` is ``"plain"`` (no correction term), ``"commutator"`` (commutator of tau
    composed into theta_i) or ``"herringbone"`` (herringbone correction with
    parameter ``n``).  Variables are ``a1..a6`` and ``b1..b6``.  ``parts`` maps
    names of the intermediate terms (``tau``, ``theta1``...) to RelTerms.
    """
    lhs = big(Meet, [Comp(_a(i), _b(i)) for i in range(1, 7)])
    tau = big(Meet, [Join(_a(i), _b(i)) for i in range(1, 7)])
    parts = {"lhs": lhs, "tau": tau}
    if variant == "herringbone":
        x5 = big(Meet, [Join(_a(i), _b(i)) for i in range(1, 6)])
        beta6n = herringbone(n, x5, _b(6), _a(6))
        corrector = Meet(x5, beta6n)
        parts["beta6^n"] = beta6n
        parts["corrector"] = corrector
    elif variant == "commutator":
        corrector = Comm(tau, tau)
        parts["corrector"] = corrector
    elif variant == "plain":
        corrector = None
    else:
        raise ValueError(f"unknown variant {variant!r}")
    meets = []
    for i in (1, 2):
        left = _mixed_join(*L_SETS[i])
        right = _mixed_join(*R_SETS[i])
        if corrector is not None:
            right = Comp(corrector, right)
        theta = Meet(left, right)
        parts[f"theta{i}"] = theta
        meets.append(Join(tau, theta))
    big_meet = big(Meet, meets)
    parts["tau_theta_meet"] = big_meet
    join_a = big(Join, [_a(i) for i in range(1, 7)])
    join_b = big(Join, [_b(i) for i in range(1, 7)])
    parts["join_alpha"] = join_a
    parts["join_beta"] = join_b
    rhs = Join(Meet(join_a, big_meet), Meet(join_b, big_meet))
    parts["rhs"] = rhs
    return lhs, rhs, parts


def taylor_assignment(alphas, betas) -> dict:
    if len(alphas) != 6 or len(betas) != 6:
        raise ValueError("need six alphas and six betas")
    out = {f"a{i + 1}": x for i, x in enumerate(alphas)}
    out.update({f"b{i + 1}": x for i, x in enumerate(betas)})
    return out


def check_taylor_inclusion(A: FiniteAlgebra, alphas, betas, flavor: str = "herringbone",
                       n: int = 0) -> InclusionVerdict:
    lhs, rhs, _ = taylor_terms(flavor, n)
    return check_inclusion(A, lhs, rhs, taylor_assignment(alphas, betas))


def counterexample_partitions():
    """alpha_i = Eqv{(a, c_i)}, beta_i = Eqv{(b, c_i)} with a=0, b=1, c_i=i+1."""
    alphas = [Partition.from_blocks(8, [[0, i + 1]]) for i in range(1, 7)]
    betas = [Partition.from_blocks(8, [[1, i + 1]]) for i in range(1, 7)]
    return alphas, betas


def scenario_taylor_counterexample(n_values=(0, 1, 2, 3)) -> dict:
    from .library import counterexample_carrier

    start = time.perf_counter()
    A = counterexample_carrier()
    names = {v: k for k, v in A.aliases.items()}
    a, b = 0, 1
    alphas, betas = counterexample_partitions()
    assign = taylor_assignment(alphas, betas)
    checks = []

    def record(name, verdict, witness=None):
        entry = {"name": name, "verdict": bool(verdict)}
        if witness is not None:
            entry["witness"] = witness
        checks.append(entry)

    lhs, _, parts0 = taylor_terms("herringbone", 0)
    left = eval_relterm(A, lhs, assign)
    record("(a,b) in meet of alpha_i o beta_i", (a, b) in left)

    join_a = eval_relterm(A, parts0["join_alpha"], assign)
    join_b = eval_relterm(A, parts0["join_beta"], assign)
    expect_a = Partition.from_blocks(8, [[0] + list(range(2, 8))])
    expect_b = Partition.from_blocks(8, [[1] + list(range(2, 8))])
    record("join of alpha_i has classes {a,c1..c6},{b}", join_a == expect_a,
           format_partition(join_a, names))
    record("join of beta_i has classes {b,c1..c6},{a}", join_b == expect_b,
           format_partition(join_b, names))

    per_n = []
    for n in n_values:
        lhs, rhs, parts = taylor_terms("herringbone", n)
        beta6n = eval_relterm(A, parts["beta6^n"], assign)
        record(f"beta6^{n} = beta6", beta6n == betas[5], format_partition(beta6n, names))
        corr = eval_relterm(A, parts["corrector"], assign)
        record(f"meet of (alpha_i v beta_i), i<=5, with beta6^{n} is 0",
               corr == Partition.identity(8))
        tt = eval_relterm(A, parts["tau_theta_meet"], assign)
        outside = all((a, j) not in tt and (j, b) not in tt for j in range(2, 8))
        record(f"(a,c_j),(c_j,b) not in meet of tau v theta_i (n={n})", outside,
               format_partition(tt, names) if isinstance(tt, Partition) else None)
        verdict = check_inclusion(A, lhs, rhs, assign)
        right = eval_relterm(A, rhs, assign)
        record(f"(a,b) not in right side (n={n})", (a, b) not in right,
               [names.get(a), names.get(b)] if not verdict.holds else None)
        per_n.append(n)
    elapsed = time.perf_counter() - start
    return {
        "scenario": "taylor-counterexample",
        "inputs": {
            "size": 8,
            "elements": {k: v for k, v in A.aliases.items()},
            "n_values": list(per_n),
            "alphas": [format_partition(x) for x in alphas],
            "betas": [format_partition(x) for x in betas],
        },
        "checks": checks,
        "timings": {"total_seconds": round(elapsed, 6)},
    }


# --- 3-element set hypothesis ----------------------------------------------

def three_set_partitions():
    return con_lattice(make_set_algebra(3))


@dataclass
class ThreeSetVerdict:
    fails: bool
    assignment: dict | None = None
    witness: tuple | None = None
    checked: int = 0

    def __bool__(self):
        return self.fails


def check_fails_on_3set(p: RelTerm, q: RelTerm) -> ThreeSetVerdict:
    """First assignment of pairwise-disjoint equivalences on {0,1,2} violating p <= q."""
    A = make_set_algebra(3)
    names = variables(p) + [v for v in variables(q) if v not in variables(p)]
    parts = three_set_partitions()
    checked = 0
    for combo in itertools.product(parts, repeat=len(names)):
        if any(not meet(x, y).is_identity() for x, y in itertools.combinations(combo, 2)):
            continue
        assignment = dict(zip(names, combo))
        checked += 1
        verdict = check_inclusion(A, p, q, assignment)
        if not verdict.holds:
            return ThreeSetVerdict(True, assignment, verdict.witness, checked)
    return ThreeSetVerdict(False, checked=checked)


# --- commutator / herringbone corrections of a ^ (b o g) <= p --------------

_X, _Y, _Z = RVar("x"), RVar("y"), RVar("z")


def _sq(t):
    return Comm(t, t)


G_CHOICES = (_sq(Meet(_Y, Join(_X, _Z))), _sq(Meet(_Z, Join(_X, _Y))))


def f_choices(n: int):
    return (
        Meet(_Y, herringbone(n, _Y, _X, _Z)),
        Meet(_Y, herringbone(n, _Y, _Z, _X)),
        Meet(_Z, herringbone(n, _Z, _Y, _X)),
        Meet(_Z, herringbone(n, _Z, _X, _Y)),
    )


def primed_terms(variant, choices):
    """``{a: a', b: b', g: g'}`` for one choice per primed variable.

    variant ``"commutator"``: ``x' = x o G(x, ., .) o x`` with G among the two
    commutator squares; variant ``("herringbone", n)``: ``x' = x o F(x, ., .) o x`` with
    F among the four herringbone meets.  The argument orders are
    ``(a,b,g)``, ``(b,a,g)`` and ``(g,a,b)`` for G and ``(a,b,g)``,
    ``(b,a,g)``, ``(g,b,a)`` for F.
    """
    a, b, g = RVar("a"), RVar("b"), RVar("g")
    if variant == "commutator":
        templates = G_CHOICES
        orders = ((a, b, g), (b, a, g), (g, a, b))
    else:
        kind, n = variant
        if kind != "herringbone":
            raise ValueError(f"unknown variant {variant!r}")
        templates = f_choices(n)
        orders = ((a, b, g), (b, a, g), (g, b, a))
    out = {}
    for (base, (x, y, z)), choice in zip(((a, orders[0]), (b, orders[1]), (g, orders[2])), choices):
        inner = substitute(templates[choice], {"x": x, "y": y, "z": z})
        out[base.name] = Comp(Comp(base, inner), base)
    return out


def choice_space(variant):
    k = len(G_CHOICES) if variant == "commutator" else 4
    return list(itertools.product(range(k), repeat=3))


@dataclass
class PrimedVerdict:
    holds_all: bool
    holds_some: bool
    results: list = field(default_factory=list)  # (choice, InclusionVerdict)


def check_primed_inclusion(A: FiniteAlgebra, variant, alpha, beta, gamma, p: RelTerm,
                   choices=None) -> PrimedVerdict:
    """Check ``a ^ (b o g) <= p(a', b', g')``.

    ``choices`` is one triple of choice indices or None for every triple.
    """
    left = Meet(RVar("a"), Comp(RVar("b"), RVar("g")))
    extra = set(variables(p)) - {"a", "b", "g"}
    if extra:
        raise ValueError(f"p may only use the variables a, b, g; found {sorted(extra)}")
    assign = {"a": alpha, "b": beta, "g": gamma}
    triples = [tuple(choices)] if choices is not None else choice_space(variant)
    results = []
    for triple in triples:
        primed = primed_terms(variant, triple)
        right = substitute(p, primed)
        results.append((triple, check_inclusion(A, left, right, assign)))
    verdicts = [r.holds for _, r in results]
    return PrimedVerdict(all(verdicts), any(verdicts), results)


# --- herringbone lemma -----------------------------------------------------

@dataclass
class HerringboneVerdict:
    holds: bool
    delta: Partition
    commutator: Partition
    steps: int
    beta_chain: list = field(default_factory=list)
    gamma_chain: list = field(default_factory=list)

    def __bool__(self):
        return self.holds


def herringbone_chains(alpha: Partition, beta: Partition, gamma: Partition,
                       max_steps: int | None = None):
    """``beta^n`` and ``gamma^n`` until the pair repeats.

    Uses ``beta^(n+1) = beta v (alpha ^ gamma^n)`` and its mirror image; once
    both stop moving, all later terms agree.
    """
    limit = alpha.size ** 2 + 1 if max_steps is None else max_steps
    bs, gs = [beta], [gamma]
    for _ in range(limit):
        nb = join(beta, meet(alpha, gs[-1]))
        ng = join(gamma, meet(alpha, bs[-1]))
        if nb == bs[-1] and ng == gs[-1]:
            return bs, gs
        bs.append(nb)
        gs.append(ng)
    raise RuntimeError("herringbone chain did not stabilize within the safety bound")


def check_herringbone_lemma(A: FiniteAlgebra, alpha: Partition, beta: Partition,
                            gamma: Partition) -> HerringboneVerdict:
    """``[α ∧ (β ∨ γ), α ∧ (β ∨ γ)] ⊆ δ`` with δ the union of the α ∧ β^n."""
    bs, gs = herringbone_chains(alpha, beta, gamma)
    delta = meet(alpha, bs[-1])
    theta = meet(alpha, join(beta, gamma))
    comm = commutator(A, theta, theta)
    return HerringboneVerdict(comm <= delta, delta, comm, len(bs) - 1, bs, gs)
