import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from commeq.algebra import make_set_algebra
from commeq.errors import (
    BudgetExceeded,
    JoinRequiresEquivalences,
    OperandNotCongruence,
    SizeMismatch,
    UnboundVariable,
)
from commeq.library import random_algebra, symmetric_group_s3
from commeq.relations import (
    BinRel,
    Partition,
    cg,
    check_eq_exhaustive,
    check_inclusion,
    compose,
    con_lattice,
    eqv_closure,
    eval_relterm,
    format_partition,
    is_congruence,
    join,
    meet,
    parse_partition,
)
from commeq.terms import parse_relterm

ALPHA = Partition.from_blocks(3, [[0, 2]])
BETA = Partition.from_blocks(3, [[0, 1]])
GAMMA = Partition.from_blocks(3, [[1, 2]])


def partitions(n):
    return st.lists(st.integers(0, n - 1), min_size=n, max_size=n).map(
        lambda labels: Partition(n, labels))


def relations(n):
    return st.lists(st.booleans(), min_size=n * n, max_size=n * n).map(
        lambda bits: BinRel(n, np.array(bits).reshape(n, n)))


def test_partition_normalizes_labels():
    p = Partition(4, [7, 3, 7, 3])
    assert p.reps == (0, 1, 0, 1)
    assert p.blocks() == [[0, 2], [1, 3]]
    assert format_partition(p) == "{{0,2},{1,3}}"
    assert format_partition(p, {0: "a", 1: "b"}) == "{{a,2},{b,3}}"


def test_parse_partition():
    assert parse_partition("{{0,2},{1,3}}", 4) == Partition(4, [0, 1, 0, 1])
    assert parse_partition("{{1,2}}", 3) == GAMMA
    assert parse_partition("0", 3).is_identity()
    assert parse_partition("full", 3).is_full()
    for bad in ["{0,1}", "{{0,1},{1}}", "{{0,9}}", "{{0,x}}", "[0]"]:
        with pytest.raises(ValueError):
            parse_partition(bad, 3)


@given(partitions(5))
def test_partition_roundtrip(p):
    assert parse_partition(format_partition(p), 5) == p
    assert p.rel.is_equivalence()
    assert p.rel.as_partition() == p
    assert all(min(b) == p.reps[b[0]] for b in p.blocks())


def test_eqv_closure_examples():
    assert eqv_closure(BinRel.from_pairs(3, [(0, 1)])) == BETA
    assert eqv_closure(BinRel(4)).is_identity()
    assert eqv_closure(BinRel.from_pairs(3, [(0, 1), (1, 2)])).is_full()


def test_compose_examples():
    r = compose(ALPHA, BETA)
    everything = {(a, b) for a in range(3) for b in range(3)}
    assert set(r.pairs()) == everything - {(1, 2)}
    R = BinRel.from_pairs(3, [(0, 1), (2, 0)])
    assert compose(R, BinRel.identity(3)) == R
    assert len(compose(BinRel(3), R)) == 0


def test_meet_join_examples():
    assert meet(ALPHA, BETA).is_identity()
    assert join(ALPHA, BETA).is_full()
    R = BinRel.from_pairs(3, [(0, 1)])
    assert meet(R, R) == R
    with pytest.raises(JoinRequiresEquivalences):
        join(R, BETA)


@given(relations(4), relations(4), relations(4))
def test_compose_associative_meet_laws(r, s, t):
    assert compose(compose(r, s), t) == compose(r, compose(s, t))
    assert meet(r, s) == meet(s, r)
    assert meet(meet(r, s), t) == meet(r, meet(s, t))
    assert meet(r, r) == r
    naive = {(a, c) for a, b in r.pairs() for b2, c in s.pairs() if b == b2}
    assert set(compose(r, s).pairs()) == naive


@given(partitions(5), partitions(5))
def test_join_against_transitive_closure(p, q):
    expected = oracles.transitive_closure(set(p.rel.pairs()) | set(q.rel.pairs()))
    assert set(join(p, q).rel.pairs()) == expected
    assert isinstance(meet(p, q), Partition)
    assert set(meet(p, q).rel.pairs()) == set(p.rel.pairs()) & set(q.rel.pairs())


def test_cg_examples(z4):
    assert cg(z4, [(0, 2)]) == Partition.from_blocks(4, [[0, 2], [1, 3]])
    assert cg(z4, []).is_identity()
    assert cg(make_set_algebra(4), [(0, 1)]) == Partition.from_blocks(4, [[0, 1]])


def test_cg_against_oracle(rng):
    for trial in range(25):
        A = random_algebra(rng, 4, (2,) if trial % 2 else (1, 1))
        for a, b in itertools.combinations(range(4), 2):
            assert set(cg(A, [(a, b)]).rel.pairs()) == oracles.cg(A, [(a, b)])


def test_con_lattice_examples(z4):
    assert [format_partition(p) for p in con_lattice(z4)] == [
        "{{0},{1},{2},{3}}", "{{0,2},{1,3}}", "{{0,1,2,3}}"]
    assert len(con_lattice(make_set_algebra(1))) == 1
    s3 = con_lattice(symmetric_group_s3())
    assert [format_partition(p) for p in s3][1] == "{{0,3,4},{1,2,5}}"


@pytest.mark.parametrize("n", range(1, 6))
def test_set_algebra_lattice_is_bell(n):
    assert len(con_lattice(make_set_algebra(n))) == oracles.bell(n)


def test_con_lattice_against_brute_force(rng):
    for trial in range(30):
        A = random_algebra(rng, 4, (2,) if trial % 3 else (1,))
        got = {p.reps for p in con_lattice(A)}
        assert got == set(oracles.congruences(A))
        assert all(is_congruence(A, p) for p in con_lattice(A))


def test_lattice_laws(rng):
    planted = Partition.from_blocks(5, [[0, 1], [2, 3, 4]])
    A = random_algebra(rng, 5, (1,), planted=planted)
    L = con_lattice(A)
    for p, q in itertools.product(L, repeat=2):
        j = join(p, q)
        assert j in L
        assert [r for r in L if p <= r and q <= r and r < j] == []
        assert compose(p, p) == p.rel and Partition.identity(5) <= p


def test_eval_relterm_examples(set3):
    t = parse_relterm("a ^ (b o g)")
    got = eval_relterm(set3, t, {"a": ALPHA, "b": BETA, "g": GAMMA})
    assert set(got.pairs()) == {(0, 0), (1, 1), (2, 2), (0, 2)}
    assert eval_relterm(set3, parse_relterm("X1 v X1"), {"X1": GAMMA}) == GAMMA
    full8 = Partition.full(8)
    assert eval_relterm(make_set_algebra(8), parse_relterm("[t,t]"), {"t": full8}).is_identity()


def test_eval_relterm_errors(z4, set3):
    with pytest.raises(UnboundVariable):
        eval_relterm(set3, parse_relterm("a o b"), {"a": ALPHA})
    with pytest.raises(OperandNotCongruence) as info:
        eval_relterm(z4, parse_relterm("(a o b) v a"),
                     {"a": Partition.from_blocks(4, [[0, 1]]), "b": Partition.identity(4)})
    with pytest.raises(OperandNotCongruence) as info:
        eval_relterm(set3, parse_relterm("(a o b) v a"), {"a": ALPHA, "b": BETA})
    assert str(info.value.subterm) is not None
    with pytest.raises(SizeMismatch):
        eval_relterm(set3, parse_relterm("a"), {"a": Partition.identity(4)})


def test_eval_relterm_against_pair_sets(rng):
    terms = [parse_relterm(s) for s in [
        "a o b o a", "a ^ (b o g)", "(a v b) ^ g", "a o (b v g) o a",
        "[a,b] v g", "[a v b, g] o a", "(a ^ b) v (a ^ g)"]]
    for trial in range(12):
        planted = Partition.from_blocks(4, [[0, 1], [2, 3]])
        A = random_algebra(rng, 4, (1,), planted=planted if trial % 2 else None)
        L = con_lattice(A)
        for t in terms:
            env = {v: L[int(rng.integers(len(L)))] for v in "abg"}
            got = eval_relterm(A, t, env)
            want = oracles.evaluate(A, t, {k: set(v.rel.pairs()) for k, v in env.items()})
            assert set((got.rel if isinstance(got, Partition) else got).pairs()) == want


def test_check_inclusion_examples(set3):
    env = {"a": ALPHA, "b": BETA, "g": GAMMA}
    v = check_inclusion(set3, parse_relterm("a ^ (b o g)"), parse_relterm("(a ^ b) o (a ^ g)"), env)
    assert not v and v.witness == (0, 2)
    p = parse_relterm("a o b o g")
    assert check_inclusion(set3, p, p, env)
    assert check_inclusion(set3, p, parse_relterm("t"), {**env, "t": Partition.full(3)})


def test_check_eq_exhaustive_examples(z4, set3):
    v = check_eq_exhaustive(z4, parse_relterm("a o b"), parse_relterm("b o a"), 2)
    assert v and v.checked == 9
    v = check_eq_exhaustive(set3, parse_relterm("a ^ (b o g)"), parse_relterm("(a ^ b) o (a ^ g)"), 3)
    assert not v
    # the failing assignment really fails
    assert not check_inclusion(set3, parse_relterm("a ^ (b o g)"),
                               parse_relterm("(a ^ b) o (a ^ g)"), v.assignment)
    p = parse_relterm("a ^ b o a")
    assert check_eq_exhaustive(set3, p, p)
    with pytest.raises(ValueError):
        check_eq_exhaustive(set3, p, p, 3)


def test_check_eq_exhaustive_budget():
    A = make_set_algebra(4)
    with pytest.raises(BudgetExceeded) as info:
        check_eq_exhaustive(A, parse_relterm("a o b o c"), parse_relterm("c"), budget=100)
    assert info.value.required == 15 ** 3
