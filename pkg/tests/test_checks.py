import itertools
import json

import pytest

from commeq.algebra import parse_algterm
from commeq.checks import (
    check_commutator_eq,
    check_fails_on_3set,
    check_herringbone_lemma,
    check_idempotence,
    check_taylor_inclusion,
    check_primed_inclusion,
    check_weak_difference,
    choice_space,
    counterexample_partitions,
    herringbone_chains,
    primed_terms,
    scenario_taylor_counterexample,
    taylor_terms,
)
from commeq.commutator import commutator
from commeq.errors import BudgetExceeded
from commeq.library import counterexample_carrier, majority_algebra, random_algebra
from commeq.pixley_wille import eq_commutator
from commeq.relations import Partition, check_inclusion, con_lattice, eval_relterm, join, meet
from commeq.search import verify_witness
from commeq.terms import parse_relterm, render

T = parse_algterm
P = parse_relterm
Z4_MALCEV = T("plus(plus(x1,neg(x2)),x3)")
S3_MALCEV = T("mul(mul(x1,inv(x2)),x3)")


def test_commutator_eq_examples(z4, set2):
    for A in (z4, set2, majority_algebra()):
        assert check_commutator_eq(A, T("x1"), T("x1"))
    v = check_commutator_eq(set2, T("x1"), T("x2"))
    assert not v and v.theta.is_full() and v.tuple == (0, 1)
    assert check_commutator_eq(z4, Z4_MALCEV, T("plus(plus(x3,neg(x2)),x1)"))


def test_commutator_eq_is_a_relaxation(rng):
    # pointwise-equal term functions always pass
    for _ in range(8):
        planted = Partition.from_blocks(4, [[0, 1], [2, 3]])
        A = random_algebra(rng, 4, (2,), planted=planted)
        assert check_commutator_eq(A, T("f0(x1,f0(x2,x2))"), T("f0(x1,f0(x2,x2))"))
        assert check_commutator_eq(A, T("f0(x1,x2)"), T("f0(x1,x2)"))


def test_commutator_eq_against_definition(rng):
    for _ in range(8):
        planted = Partition.from_blocks(4, [[0, 2], [1, 3]])
        A = random_algebra(rng, 4, (2,), planted=planted)
        p, q = T("f0(x1,x2)"), T("f0(x2,x1)")
        want = True
        for theta in con_lattice(A):
            c = commutator(A, theta, theta)
            for x, y in itertools.product(range(4), repeat=2):
                if theta.related(x, y) and not c.related(A.op("f0", x, y), A.op("f0", y, x)):
                    want = False
        assert check_commutator_eq(A, p, q).holds == want


def test_commutator_eq_budget(z4):
    with pytest.raises(BudgetExceeded):
        check_commutator_eq(z4, T("x1"), T("x5"), budget=100)


def test_weak_difference_examples(z4, set2, s3):
    assert check_weak_difference(z4, Z4_MALCEV)
    v = check_weak_difference(set2, T("x1"))
    assert not v and v.theta.is_full() and v.pair == (0, 1) and v.side == "d(b,b,a)"
    assert check_weak_difference(s3, S3_MALCEV)


def test_weak_difference_passes_eq_commutator(z4):
    c = eq_commutator(P("a o b"), P("b o a"))
    # t3(x, y, z) = x - z + y satisfies both relaxed Mal'cev equations
    assert verify_witness(z4, c, {"t3": T("plus(plus(x1,neg(x3)),x2)")})


def test_idempotence(z4):
    assert check_idempotence(z4, T("x1")) == (True, None)
    assert check_idempotence(z4, T("plus(x1,x2)")) == (False, 1)
    assert check_idempotence(majority_algebra(), T("maj(x1,x2,x3)")) == (True, None)
    assert check_idempotence(z4, Z4_MALCEV) == (True, None)


def test_taylor_terms_shape():
    lhs, rhs, parts = taylor_terms("plain")
    assert render(lhs).count(" o ") == 6
    assert "[" not in render(rhs)
    _, _, parts_comm = taylor_terms("commutator")
    assert render(parts_comm["theta1"]).startswith("(a1 v a5 v a6 v b2 v b3 v b4) ^ ([")
    _, _, parts_hb = taylor_terms("herringbone", 1)
    assert render(parts_hb["beta6^n"]).startswith("b6 v ")
    with pytest.raises(ValueError):
        taylor_terms("eq45")


def test_taylor_eq_trivial_assignments(z4):
    ident = [Partition.identity(4)] * 6
    full = [Partition.full(4)] * 6
    for flavor in ("plain", "commutator", "herringbone"):
        assert check_taylor_inclusion(z4, ident, ident, flavor, n=1)
        assert check_taylor_inclusion(z4, full, full, flavor, n=1)


def test_taylor_counterexample_each_flavor():
    A = counterexample_carrier()
    alphas, betas = counterexample_partitions()
    for flavor, n in (("plain", 0), ("commutator", 0), ("herringbone", 0), ("herringbone", 1), ("herringbone", 3)):
        v = check_taylor_inclusion(A, alphas, betas, flavor, n)
        assert not v and v.witness == (0, 1)


def test_scenario_report():
    report = scenario_taylor_counterexample([0, 1, 2, 3])
    assert set(report) == {"scenario", "inputs", "checks", "timings"}
    assert all(c["verdict"] for c in report["checks"])
    names = [c["name"] for c in report["checks"]]
    assert sum("not in right side" in n for n in names) == 4
    json.dumps(report)
    assert report["inputs"]["elements"]["c6"] == 7


def test_counterexample_facts_directly():
    A = counterexample_carrier()
    alphas, betas = counterexample_partitions()
    ja = alphas[0]
    for x in alphas[1:]:
        ja = join(ja, x)
    assert ja.blocks() == [[0, 2, 3, 4, 5, 6, 7], [1]]
    tau = meet(join(alphas[0], betas[0]), join(alphas[1], betas[1]))
    for i in range(2, 6):
        tau = meet(tau, join(alphas[i], betas[i]))
    # tau identifies a and b only
    assert tau.blocks()[0] == [0, 1]
    assert commutator(A, tau, tau).is_identity()


def test_fails_on_3set_examples(set3):
    p, q = P("a ^ (b o g)"), P("(a ^ b) o (a ^ g)")
    v = check_fails_on_3set(p, q)
    assert v.fails
    assert all(meet(x, y).is_identity()
               for x, y in itertools.combinations(v.assignment.values(), 2))
    assert not check_inclusion(set3, p, q, v.assignment)
    assert v.witness == check_inclusion(set3, p, q, v.assignment).witness
    # the assignment quoted with the example fails too
    quoted = {"a": Partition.from_blocks(3, [[0, 2]]), "b": Partition.from_blocks(3, [[0, 1]]),
              "g": Partition.from_blocks(3, [[1, 2]])}
    assert check_inclusion(set3, p, q, quoted).witness == (0, 2)

    v = check_fails_on_3set(P("a o b"), P("b o a"))
    assert v.fails and not check_inclusion(set3, P("a o b"), P("b o a"), v.assignment)
    quoted = {"a": Partition.from_blocks(3, [[0, 1]]), "b": Partition.from_blocks(3, [[1, 2]])}
    assert check_inclusion(set3, P("a o b"), P("b o a"), quoted).witness == (0, 2)

    assert not check_fails_on_3set(P("a o b"), P("a o b"))


def test_primed_terms_shape():
    primed = primed_terms("commutator", (0, 1, 0))
    assert render(primed["a"]) == "a o [b ^ (a v g),b ^ (a v g)] o a"
    assert render(primed["b"]) == "b o [g ^ (b v a),g ^ (b v a)] o b"
    assert render(primed["g"]) == "g o [a ^ (g v b),a ^ (g v b)] o g"
    primed = primed_terms(("herringbone", 1), (0, 0, 0))
    assert render(primed["a"]) == "a o b ^ (a v b ^ g) o a"
    assert len(choice_space("commutator")) == 8 and len(choice_space(("herringbone", 2))) == 64


def test_primed_inclusion_examples(z4, set3):
    p = P("(a ^ b) o (a ^ g)")
    L = con_lattice(z4)
    for a, b, g in itertools.product(L, repeat=3):
        assert check_primed_inclusion(z4, "commutator", a, b, g, p).holds_all
    ident = Partition.identity(3)
    assert check_primed_inclusion(set3, ("herringbone", 1), ident, ident, ident, p).holds_all
    a = Partition.from_blocks(3, [[0, 2]])
    b = Partition.from_blocks(3, [[0, 1]])
    g = Partition.from_blocks(3, [[1, 2]])
    for variant in ("commutator", ("herringbone", 1)):
        v = check_primed_inclusion(set3, variant, a, b, g, p)
        assert not v.holds_some
        assert all(r.witness == (0, 2) for _, r in v.results)
    one = check_primed_inclusion(set3, "commutator", a, b, g, p, choices=(1, 1, 1))
    assert len(one.results) == 1
    with pytest.raises(ValueError):
        check_primed_inclusion(set3, "commutator", a, b, g, P("a o t"))


def test_herringbone_lemma_examples(s3):
    ident = Partition.identity(6)
    assert check_herringbone_lemma(s3, ident, ident, ident)
    full = Partition.full(6)
    v = check_herringbone_lemma(s3, full, full, full)
    assert v and v.delta.is_full() and v.commutator.blocks() == [[0, 3, 4], [1, 2, 5]]


def test_herringbone_chains_match_terms(rng):
    from commeq.terms import herringbone

    planted = Partition.from_blocks(4, [[0, 1], [2, 3]])
    A = random_algebra(rng, 4, (1,), planted=planted)
    L = con_lattice(A)
    for a, b, g in itertools.product(L, repeat=3):
        bs, gs = herringbone_chains(a, b, g)
        env = {"x": a, "y": b, "z": g}
        for n in range(len(bs)):
            assert eval_relterm(A, herringbone(n), env) == bs[n]
            assert eval_relterm(A, herringbone(n, "x", "z", "y"), env) == gs[n]


def test_herringbone_lemma_random(rng):
    count = 0
    for trial in range(10):
        planted = Partition.from_blocks(4, [[0, 1], [2, 3]] if trial % 2 else [[0, 1, 2]])
        A = random_algebra(rng, 4, (2,) if trial % 3 else (1, 2), planted=planted)
        for a, b, g in itertools.product(con_lattice(A), repeat=3):
            assert check_herringbone_lemma(A, a, b, g)
            count += 1
    assert count >= 50
