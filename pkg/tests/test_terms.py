import itertools

import pytest
from hypothesis import given, strategies as st

from commeq.errors import TermSyntaxError, UnboundVariable
from commeq.library import random_algebra
from commeq.relations import Partition, con_lattice, eval_relterm
from commeq.terms import (
    Comm,
    Comp,
    Join,
    Meet,
    RVar,
    alternating,
    count_nodes,
    expand_join,
    herringbone,
    is_join_free,
    parse_relterm,
    render,
    substitute,
    variables,
)

a, b, g, t = RVar("a"), RVar("b"), RVar("g"), RVar("t")


def test_parse_examples():
    assert parse_relterm("a ^ (b o g)") == Meet(a, Comp(b, g))
    assert parse_relterm("a o b v g") == Join(Comp(a, b), g)
    assert parse_relterm("[t,t] o a") == Comp(Comm(t, t), a)
    assert parse_relterm("a . b + g") == parse_relterm("a o b v g")


def test_precedence_and_associativity():
    assert parse_relterm("a ^ b o g") == Comp(Meet(a, b), g)
    assert parse_relterm("a o b o g") == Comp(Comp(a, b), g)
    assert parse_relterm("a v b ^ g") == Join(a, Meet(b, g))
    # variables named like operator words need other spelling
    assert parse_relterm("ov o vo") == Comp(RVar("ov"), RVar("vo"))


@pytest.mark.parametrize("text,pos", [("a ^", 3), ("(a o b", 6), ("a b", 2), ("a & b", 2),
                                      ("[a b]", 3), ("", 0), (")", 0)])
def test_syntax_errors_report_position(text, pos):
    with pytest.raises(TermSyntaxError) as info:
        parse_relterm(text)
    assert info.value.position == pos


names = st.sampled_from(["a", "b", "g", "t", "X1"])
terms = st.recursive(
    names.map(RVar),
    lambda sub: st.builds(Meet, sub, sub) | st.builds(Comp, sub, sub)
    | st.builds(Join, sub, sub) | st.builds(Comm, sub, sub),
    max_leaves=10)


@given(terms)
def test_render_parse_roundtrip(t):
    text = render(t)
    assert parse_relterm(text) == t
    assert render(parse_relterm("  " + text.replace(" ", "\t ") + "\n")) == text


def test_render_minimal_parentheses():
    assert render(parse_relterm("(a ^ b) o (a ^ g)")) == "a ^ b o a ^ g"
    assert render(parse_relterm("a o (b o g)")) == "a o (b o g)"
    assert render(parse_relterm("(a v b) ^ g")) == "(a v b) ^ g"
    assert render(parse_relterm("[a v b, g]")) == "[a v b,g]"


def test_expand_join_examples():
    x1, x2 = RVar("X1"), RVar("X2")
    assert expand_join(Join(x1, x2), 3) == Comp(Comp(x1, x2), x1)
    assert expand_join(Join(x1, x2), 1) == x1
    assert expand_join(Meet(x1, x2), 5) == Meet(x1, x2)
    assert alternating(x1, x2, 4) == parse_relterm("X1 o X2 o X1 o X2")
    with pytest.raises(ValueError):
        expand_join(x1, 0)


def test_herringbone_examples():
    x, y, z = RVar("x"), RVar("y"), RVar("z")
    assert herringbone(0) == y
    assert herringbone(1) == Join(y, Meet(x, z))
    assert herringbone(2) == Join(y, Meet(x, Join(z, Meet(x, y))))
    with pytest.raises(ValueError):
        herringbone(-1)


def test_substitute_examples():
    y1 = herringbone(1)
    alpha, beta, gamma = RVar("alpha"), RVar("beta"), RVar("gamma")
    assert substitute(y1, {"x": alpha, "y": beta, "z": gamma}) == Join(beta, Meet(alpha, gamma))
    assert substitute(RVar("x"), {"x": Comp(a, b)}) == Comp(a, b)
    swapped = substitute(y1, {"x": RVar("x"), "y": RVar("z"), "z": RVar("y")})
    assert swapped == parse_relterm("z v x ^ y")
    with pytest.raises(UnboundVariable):
        substitute(y1, {"x": a})


def test_variables_and_counts():
    p = parse_relterm("g o (a ^ g) v b")
    assert variables(p) == ["g", "a", "b"]
    assert count_nodes(p, Comp) == 1 and count_nodes(p, Join) == 1
    assert not is_join_free(p) and is_join_free(parse_relterm("a o b"))


def _planted_algebras(rng, count):
    blocks = [[[0, 1], [2, 3]], [[0, 1, 2]], [[0, 3], [1, 2]]]
    for i in range(count):
        yield random_algebra(rng, 4, (1,), planted=Partition.from_blocks(4, blocks[i % 3]))


def test_expand_join_monotone_and_stabilizes(rng):
    ps = [parse_relterm(s) for s in ["a v b", "a ^ (b v g)", "(a v b) o (g v a)"]]
    for A in _planted_algebras(rng, 9):
        L = con_lattice(A)
        for p in ps:
            for combo in itertools.product(L, repeat=3):
                env = dict(zip("abg", combo))
                full = eval_relterm(A, p, env)
                full = full.rel if isinstance(full, Partition) else full
                prev = None
                for k in range(1, A.size ** 2 + 1):
                    cur = eval_relterm(A, expand_join(p, k), env)
                    cur = cur.rel if isinstance(cur, Partition) else cur
                    assert cur <= full
                    if prev is not None:
                        assert prev <= cur
                    prev = cur
                    if cur == full:
                        break
                assert prev == full


def test_herringbone_cofinality(rng):
    for A in _planted_algebras(rng, 4):
        L = con_lattice(A)
        for alpha, beta, gamma in itertools.product(L, repeat=3):
            env = {"x": alpha, "y": beta, "z": gamma}

            def chain(n, first):
                y = herringbone(n, "x", first, "z" if first == "y" else "y")
                return eval_relterm(A, Meet(RVar("x"), y), env)

            for n in range(1, 4):
                assert chain(n, "z") <= chain(n + 1, "y")
                assert chain(n - 1, "y") <= chain(n, "z")
