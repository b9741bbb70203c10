"""Command-line front end.

Exit status: 0 success or affirmative answer, 1 negative answer (untypable,
type error, not equivalent), 2 usage or input-format error.  Results go to
stdout and diagnostics to stderr.  A file argument of ``-`` reads stdin.
"""
from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .equivalence import Counterexample, poly_equiv_bounded
from .evaluator import evaluate, load_database, render_database, render_relation
from .inference import InferenceDiagnostic, Mode, infer, typable, typable_bruteforce
from .ra_ast import ParseError, parse_expr
from .set_equations import parse_system, render_solution, solve
from .type_formulas import render_formula
from .typing_rules import TypeCheckError, parse_assignment, render_assignment, typecheck

OK, NEGATIVE, USAGE = 0, 1, 2


class _InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _InputError(message)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise _InputError(f"{path}: {exc.strerror}") from exc


def _expr(path: str):
    try:
        return parse_expr(_read(path))
    except ParseError as exc:
        raise _InputError(f"{path}: {exc}") from exc


def cmd_infer(args) -> int:
    e = _expr(args.expr)
    result = infer(e, Mode.EARLY_STOP if args.early_stop else Mode.COMPLETE)
    if isinstance(result, InferenceDiagnostic):
        print(f"untypable: {result}", file=sys.stderr)
        return NEGATIVE
    sys.stdout.write(render_formula(result, simplify=args.simplify))
    return OK


def cmd_check(args) -> int:
    try:
        ta = parse_assignment(_read(args.schema))
    except ValueError as exc:
        raise _InputError(f"{args.schema}: {exc}") from exc
    e = _expr(args.expr)
    try:
        tau = typecheck(ta, e)
    except ValueError as exc:
        raise _InputError(str(exc)) from exc
    except TypeCheckError as exc:
        print(f"type error: {exc}", file=sys.stderr)
        return NEGATIVE
    print(" ".join(sorted(tau)))
    return OK


def cmd_typable(args) -> int:
    e = _expr(args.expr)
    verdict = typable(e)
    if args.oracle:
        try:
            witness = typable_bruteforce(e)
        except ValueError as exc:
            raise _InputError(str(exc)) from exc
        if (witness is not None) != verdict:
            print(f"oracle disagreement: inference says {verdict}, brute force says "
                  f"{witness is not None}", file=sys.stderr)
            return NEGATIVE
    print("typable" if verdict else "untypable")
    return OK if verdict else NEGATIVE


def cmd_solve(args) -> int:
    try:
        system = parse_system(_read(args.system))
    except ValueError as exc:
        raise _InputError(f"{args.system}: {exc}") from exc
    sys.stdout.write(render_solution(system, solve(system)))
    return OK


def cmd_eval(args) -> int:
    try:
        db = load_database(_read(args.db))
    except ValueError as exc:
        raise _InputError(f"{args.db}: {exc}") from exc
    e = _expr(args.expr)
    try:
        rel = evaluate(db, e)
    except ValueError as exc:
        raise _InputError(str(exc)) from exc
    except TypeCheckError as exc:
        print(f"type error: {exc}", file=sys.stderr)
        return NEGATIVE
    sys.stdout.write(render_relation("result", rel))
    return OK


def cmd_equiv(args) -> int:
    e1, e2 = _expr(args.first), _expr(args.second)
    try:
        result = poly_equiv_bounded(e1, e2, args.attrs, args.values, args.rows)
    except ValueError as exc:
        raise _InputError(str(exc)) from exc
    if not isinstance(result, Counterexample):
        print("equivalent")
        return OK
    print(f"not equivalent: {result.reason}", file=sys.stderr)
    if result.database is not None:
        sys.stdout.write(render_database(result.database))
    else:
        sys.stdout.write(render_assignment(result.schema))
    return NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="polyra", description="Polymorphic type inference for relational algebra.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("infer", help="print the principal type formula")
    s.add_argument("expr")
    s.add_argument("--early-stop", action="store_true", help="report the first unsatisfiable constraint")
    s.add_argument("--simplify", action="store_true", help="simplify printed constraints")
    s.set_defaults(fn=cmd_infer)

    s = sub.add_parser("check", help="type-check under a given type assignment")
    s.add_argument("--schema", required=True)
    s.add_argument("expr")
    s.set_defaults(fn=cmd_check)

    s = sub.add_parser("typable", help="decide typability")
    s.add_argument("expr")
    s.add_argument("--oracle", action="store_true", help="cross-check against brute force")
    s.set_defaults(fn=cmd_typable)

    s = sub.add_parser("solve-eqs", help="solve a system of set equations")
    s.add_argument("system")
    s.set_defaults(fn=cmd_solve)

    s = sub.add_parser("eval", help="evaluate on a database")
    s.add_argument("--db", required=True)
    s.add_argument("expr")
    s.set_defaults(fn=cmd_eval)

    s = sub.add_parser("equiv", help="bounded search for a non-equivalence witness")
    s.add_argument("first")
    s.add_argument("second")
    s.add_argument("--attrs", type=int, default=2)
    s.add_argument("--values", type=int, default=2)
    s.add_argument("--rows", type=int, default=2)
    s.set_defaults(fn=cmd_equiv)
    return p


def run(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.fn(args)
    except _InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
