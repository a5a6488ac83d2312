"""Command line interface.

Exit codes: 0 success / the checked property holds, 1 the property fails (or
a failure witness was found), 2 usage or input error, 3 budget exceeded.
Results go to stdout, diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import config
from .algebra import parse_algterm
from .errors import BudgetExceeded, CommeqError
from .fileformat import read_algebra
from .relations import (
    check_eq_exhaustive,
    check_inclusion,
    con_lattice,
    format_partition,
    is_congruence,
    parse_partition,
)
from .terms import herringbone, parse_relterm, render

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


class InputError(Exception):
    pass


def _names(A):
    return {v: k for k, v in reversed(list(A.aliases.items()))} or None


def _congruence(A, text, what):
    theta = parse_partition(text, A.size)
    if not is_congruence(A, theta):
        raise InputError(f"{what} {text} is not a congruence")
    return theta


def cmd_congruences(args, out):
    A = read_algebra(args.file)
    names = _names(A)
    lattice = con_lattice(A)
    for theta in lattice:
        print(format_partition(theta, names), file=out)
    print(f"# {len(lattice)} congruences", file=sys.stderr)
    return EXIT_OK


def cmd_commutator(args, out):
    from .commutator import commutator

    A = read_algebra(args.file)
    alpha = _congruence(A, args.alpha, "--alpha")
    beta = _congruence(A, args.beta, "--beta")
    print(format_partition(commutator(A, alpha, beta), _names(A)), file=out)
    return EXIT_OK


def _print_verdict(verdict, A, out):
    names = _names(A)
    if verdict.holds:
        print("holds", file=out)
        return EXIT_OK
    a, b = verdict.witness
    show = (lambda e: names.get(e, str(e))) if names else str
    print(f"fails: ({show(a)},{show(b)}) is in the left side but not in the right side", file=out)
    if verdict.assignment:
        for var, rel in verdict.assignment.items():
            print(f"  {var} = {format_partition(rel, names)}", file=out)
    return EXIT_FAIL


def cmd_check_eq(args, out):
    A = read_algebra(args.file)
    p, q = parse_relterm(args.lhs), parse_relterm(args.rhs)
    if args.exhaustive:
        verdict = check_eq_exhaustive(A, p, q, budget=args.budget)
        print(f"# {verdict.checked} assignments checked", file=sys.stderr)
        return _print_verdict(verdict, A, out)
    assignment = {}
    for item in args.assign or []:
        var, eq, text = item.partition("=")
        if not eq:
            raise InputError(f"--assign expects VAR=PARTITION, got {item!r}")
        assignment[var.strip()] = _congruence(A, text, f"value of {var.strip()}")
    return _print_verdict(check_inclusion(A, p, q, assignment), A, out)


def cmd_check_commutator_eq(args, out):
    from .checks import check_commutator_eq

    A = read_algebra(args.file)
    verdict = check_commutator_eq(A, parse_algterm(args.lhs), parse_algterm(args.rhs),
                                  budget=args.budget)
    if verdict.holds:
        print("holds", file=out)
        return EXIT_OK
    theta = format_partition(verdict.theta, _names(A))
    print(f"fails at theta = {theta} with tuple {list(verdict.tuple)}", file=out)
    return EXIT_FAIL


def cmd_graph(args, out):
    from .graph import build_graph

    g = build_graph(parse_relterm(args.term))
    print(g.to_dot() if args.dot else g.dump(), file=out)
    return EXIT_OK


def cmd_pixley_wille(args, out):
    from .pixley_wille import eq_standard, render as render_condition, COMMUTATOR, STANDARD

    flavor = COMMUTATOR if args.commutator else STANDARD
    c = eq_standard(parse_relterm(args.lhs), parse_relterm(args.rhs), args.k, flavor=flavor)
    text = render_condition(c, args.format)
    if text:
        print(text, file=out)
    return EXIT_OK


def cmd_herringbone(args, out):
    if args.n < 0:
        raise InputError("N must be non-negative")
    print(render(herringbone(args.n, args.x, args.y, args.z)), file=out)
    return EXIT_OK


def cmd_search(args, out):
    from .pixley_wille import from_document
    from .search import find_condition_witness, verify_witness

    A = read_algebra(args.file)
    try:
        with open(args.condition, encoding="utf-8") as fh:
            c = from_document(fh.read())
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise InputError(f"bad condition file: {exc}") from exc
    w = find_condition_witness(A, c, budget=args.budget)
    if w is None:
        print("no terms exist (search space exhausted)", file=out)
        return EXIT_FAIL
    check = verify_witness(A, c, w)
    if not check.holds:  # pragma: no cover - would be an internal bug
        print(f"internal error: witness fails {check.equation.render()}", file=sys.stderr)
        return EXIT_INPUT
    for name, term in w.terms.items():
        print(f"{name} = {term}", file=out)
    print(f"# subpower sizes {w.stats['subpower_sizes']}, {w.stats['nodes']} nodes",
          file=sys.stderr)
    return EXIT_OK


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def cmd_scenario(args, out):
    from .checks import scenario_taylor_counterexample

    if any(n < 0 for n in args.n):
        raise InputError("--n values must be non-negative")
    report = scenario_taylor_counterexample(args.n)
    print(json.dumps(report, indent=2, ensure_ascii=False), file=out)
    return EXIT_OK if all(c["verdict"] for c in report["checks"]) else EXIT_FAIL


def cmd_check_3set(args, out):
    from .checks import check_fails_on_3set

    v = check_fails_on_3set(parse_relterm(args.lhs), parse_relterm(args.rhs))
    if not v.fails:
        print(f"no failing assignment among {v.checked}", file=out)
        return EXIT_OK
    a, b = v.witness
    print(f"fails: ({a},{b}) is in the left side but not in the right side", file=out)
    for var, rel in v.assignment.items():
        print(f"  {var} = {format_partition(rel)}", file=out)
    return EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="commeq", description="Congruence inclusions, commutators and Mal'cev conditions "
                                   "on finite algebras.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("congruences", help="list the congruence lattice")
    p.add_argument("file")
    p.set_defaults(func=cmd_congruences)

    p = sub.add_parser("commutator", help="term-condition commutator of two congruences")
    p.add_argument("file")
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta", required=True)
    p.set_defaults(func=cmd_commutator)

    p = sub.add_parser("check-eq", help="check a congruence inclusion lhs <= rhs")
    p.add_argument("file")
    p.add_argument("--lhs", required=True)
    p.add_argument("--rhs", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--assign", action="append", metavar="VAR=PARTITION")
    group.add_argument("--exhaustive", action="store_true")
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(func=cmd_check_eq)

    p = sub.add_parser("check-commutator-eq", help="check lhs ~C rhs for algebra terms")
    p.add_argument("file")
    p.add_argument("--lhs", required=True)
    p.add_argument("--rhs", required=True)
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(func=cmd_check_commutator_eq)

    p = sub.add_parser("graph", help="labelled graph of a {^, o}-term")
    p.add_argument("--term", required=True)
    p.add_argument("--dot", action="store_true")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("pixley-wille", help="Mal'cev condition of an inclusion")
    p.add_argument("--lhs", required=True)
    p.add_argument("--rhs", required=True)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--commutator", action="store_true")
    p.add_argument("--format", choices=("text", "machine"), default="text")
    p.set_defaults(func=cmd_pixley_wille)

    p = sub.add_parser("herringbone", help="print the herringbone term y^N")
    p.add_argument("n", type=int, metavar="N")
    p.add_argument("--x", default="x")
    p.add_argument("--y", default="y")
    p.add_argument("--z", default="z")
    p.set_defaults(func=cmd_herringbone)

    p = sub.add_parser("search", help="search an algebra for terms satisfying a condition")
    p.add_argument("file")
    p.add_argument("--condition", required=True, help="condition JSON (pixley-wille --format machine)")
    p.add_argument("--budget", type=int, default=config.MAX_SUBPOWER)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("scenario", help="run a named scenario")
    p.add_argument("name", choices=("taylor-counterexample",))
    p.add_argument("--n", type=_int_list, default=[0, 1, 2, 3])
    p.set_defaults(func=cmd_scenario)

    p = sub.add_parser("check-3set", help="look for a failure on the 3-element set")
    p.add_argument("--lhs", required=True)
    p.add_argument("--rhs", required=True)
    p.set_defaults(func=cmd_check_3set)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InputError, CommeqError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
