"""Fixed expressions and hand-encoded reference formulas used by tests and scripts."""
from __future__ import annotations

import itertools

from .ra_ast import Expr, Join, RelVarRef, parse_expr, relvars, specattrs
from .type_formulas import TypeFormula, fresh_attributes, instance_pairs, parse_formula
from .typing_rules import TypeCheckError, typecheck

RUNNING = "select[B=C]((rename[A/B](r) union s) join u)"
DIVISION = "project[A](r) minus project[A]((project[A](r) times s) minus r)"
INTRO = "(select[A<5]((r join s)) join ((r times u) minus v))"

REFERENCE_FORMULAS = {
    RUNNING: """
        decl r: a1 a2
        decl s: a1 a2
        decl u: a2 a3
        out: a1 a2 a3
        attr A: r & !s || A: u
        attr B: s & !r || B: true
        attr C: (r <-> s) & (r | s | u) || C: true
    """,
    DIVISION: """
        decl r: a
        decl s: a
        out:
        attr A: r & !s || A: true
    """,
    INTRO: """
        decl v: a1 a2 a3 a4
        decl r: a1 a3
        decl u: a2 a4
        decl s: a3 a4 a5
        out: a1 a2 a3 a4 a5
        attr A: (r | s) & (v <-> (r | u)) & !(r & u) || A: true
    """,
}

# intermediate stages of the running example, keyed by subexpression
TRACE_FORMULAS = {
    "rename[A/B](r)": """
        decl r: a
        out: a
        attr A: r || A: false
        attr B: !r || B: true
    """,
    "(rename[A/B](r) union s)": """
        decl r: c
        decl s: c
        out: c
        attr A: r & !s || A: false
        attr B: s & !r || B: true
    """,
    "((rename[A/B](r) union s) join u)": """
        decl r: c1 c2
        decl s: c1 c2
        decl u: c2 c3
        out: c1 c2 c3
        attr A: r & !s || A: u
        attr B: s & !r || B: true
    """,
}

UNTYPABLE = (
    "select[A=B](project[B,C](r))",
    "(project[A](r) union project[B](s))",
    'select[A>"0"](project[B](r))',
)

CORPUS = (
    RUNNING,
    DIVISION,
    INTRO,
    *UNTYPABLE,
    "((r times s) join (r union s))",
    "r",
    "(r union s)",
    "(r minus s)",
    "(r join s)",
    "(r times s)",
    "(r times r)",
    "project[A](r)",
    "project[](r)",
    "projout[A](r)",
    "rename[A/B](r)",
    "select[A=B](r)",
    "select[A=B]((r times project[A,B,C](s)))",
    "(r times select[A=B](project[A,B,C](s)))",
    "project[A]((r join project[A,B](s)))",
    "project[A]((r join s))",
    "(projout[A](r) join s)",
    "(rename[A/B](r) times rename[B/C](s))",
    "(select[A=B](r) union rename[C/A](s))",
    "((r join s) minus (s join u))",
    "(select[A=\"x\"](r) join rename[B/A](r))",
    "(project[A,B](r) minus projout[C](s))",
    "(rename[A/B](r) join rename[B/A](r))",
)


def parsed(text: str) -> Expr:
    return parse_expr(text)


def reference(text: str, table=REFERENCE_FORMULAS) -> TypeFormula:
    return parse_formula(table[text], parse_expr(text))


def join_chain(m: int) -> Expr:
    """Right-nested join of relation variables r1 .. rm."""
    e: Expr = RelVarRef(f"r{m}")
    for i in range(m - 1, 0, -1):
        e = Join(RelVarRef(f"r{i}"), e)
    return e


def typing_pairs(e: Expr, universe) -> set:
    """Brute force: {(types in sorted relvar order, output type)} over every
    assignment drawing from ``universe`` under which ``e`` is well-typed."""
    rs = sorted(relvars(e))
    universe = sorted(universe)
    types = [frozenset(c) for k in range(len(universe) + 1) for c in itertools.combinations(universe, k)]
    out = set()
    for combo in itertools.product(types, repeat=len(rs)):
        try:
            tau = typecheck(dict(zip(rs, combo)), e)
        except TypeCheckError:
            continue
        out.add((combo, tau))
    return out


def principality_gap(e: Expr, phi: TypeFormula, extra: int = 2) -> tuple[set, set]:
    """Pairs derivable but not produced by ``phi``, and produced but not derivable."""
    special = specattrs(e)
    universe = special | set(fresh_attributes(extra, special))
    derived = typing_pairs(e, universe)
    produced = instance_pairs(phi, universe)
    return derived - produced, produced - derived
