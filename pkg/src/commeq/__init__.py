"""Congruence equations, commutators and Mal'cev conditions on finite algebras."""
from .algebra import (
    App,
    FiniteAlgebra,
    Signature,
    Var,
    eval_term,
    make_set_algebra,
    parse_algterm,
    product,
    quotient,
    subuniverse_generate,
    term_table,
)
from .checks import (
    check_commutator_eq,
    check_fails_on_3set,
    check_herringbone_lemma,
    check_idempotence,
    check_taylor_inclusion,
    check_primed_inclusion,
    check_weak_difference,
    scenario_taylor_counterexample,
)
from .commutator import centralizes, commutator, generate_matrices, is_abelian_algebra
from .errors import BudgetExceeded, CommeqError
from .fileformat import parse_algebra_file, print_algebra
from .graph import build_graph, evaluate_via_graph, witness_assignment
from .pixley_wille import MalcevCondition, eq_commutator, eq_standard
from .relations import (
    BinRel,
    Partition,
    cg,
    check_eq_exhaustive,
    check_inclusion,
    con_lattice,
    eval_relterm,
    join,
    meet,
)
from .search import find_condition_witness, has_olsak_term, verify_witness
from .terms import expand_join, herringbone, parse_relterm, render

__version__ = "0.1.0"

__all__ = [
    "App",
    "BinRel",
    "BudgetExceeded",
    "build_graph",
    "centralizes",
    "cg",
    "check_commutator_eq",
    "check_eq_exhaustive",
    "check_fails_on_3set",
    "check_herringbone_lemma",
    "check_inclusion",
    "check_idempotence",
    "check_taylor_inclusion",
    "check_primed_inclusion",
    "check_weak_difference",
    "CommeqError",
    "commutator",
    "con_lattice",
    "eq_commutator",
    "eq_standard",
    "eval_relterm",
    "eval_term",
    "evaluate_via_graph",
    "expand_join",
    "find_condition_witness",
    "FiniteAlgebra",
    "generate_matrices",
    "has_olsak_term",
    "herringbone",
    "is_abelian_algebra",
    "join",
    "make_set_algebra",
    "MalcevCondition",
    "meet",
    "parse_algebra_file",
    "parse_algterm",
    "parse_relterm",
    "Partition",
    "print_algebra",
    "product",
    "quotient",
    "render",
    "scenario_taylor_counterexample",
    "Signature",
    "subuniverse_generate",
    "term_table",
    "Var",
    "verify_witness",
    "witness_assignment",
]
