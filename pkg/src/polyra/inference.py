"""Principal type inference for relational algebra expressions.

``infer`` works bottom-up over the expression.  Binary operators combine the
children's formulas by solving a system of set equations between their type
variables (the set-based stand-in for unification); unary operators only
touch attribute constraints and output conditions.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, replace
from typing import Optional, Union

from . import boolform as bf
from .ra_ast import (
    BINARY, Difference, Expr, Join, Product, Project, ProjectOut, RelVarRef,
    Rename, Select, Span, Union_, named_attrs, relvars, specattrs,
)
from .set_equations import EquationSystem, solve
from .type_formulas import (
    TypeContext, TypeFormula, conjoin, context_satisfiable,
    extend_with_attribute, outvar_invariant_holds,
)
from .typing_rules import well_typed


class Mode(enum.Enum):
    COMPLETE = "complete"
    EARLY_STOP = "early-stop"


@dataclass(frozen=True)
class InferenceDiagnostic:
    attribute: str
    at: Span
    operator: str
    kind: str = "UnsatisfiableConstraint"

    def __str__(self) -> str:
        return (f"{self.kind}: constraint on {self.attribute} became unsatisfiable "
                f"at {self.operator} ({self.at})")


class _Untypable(Exception):
    def __init__(self, diag: InferenceDiagnostic):
        self.diag = diag


_OPNAME = {
    Union_: "union", Difference: "difference", Join: "join", Product: "product",
    Select: "selection", Project: "projection", Rename: "renaming", ProjectOut: "project-out",
}


def infer(e: Expr, mode: Mode = Mode.COMPLETE) -> Union[TypeFormula, InferenceDiagnostic]:
    """Principal type formula of ``e``.

    In ``EARLY_STOP`` mode the first attribute constraint that becomes
    unsatisfiable is reported instead, located at the operator where it
    happened.  In ``COMPLETE`` mode an untypable ``e`` yields an unsatisfiable
    formula (which is principal for it).
    """
    try:
        return _infer(e, mode is Mode.EARLY_STOP)
    except _Untypable as exc:
        return exc.diag


def infer_formula(e: Expr) -> TypeFormula:
    return _infer(e, False)


def _check_sat(gamma: TypeContext, attrs, node: Expr, early: bool) -> None:
    if not early:
        return
    for A in attrs:
        if not bf.satisfiable(gamma.constraint[A], gamma.relvars):
            raise _Untypable(InferenceDiagnostic(A, node.span, _OPNAME[type(node)]))


def _infer(e: Expr, early: bool) -> TypeFormula:
    if isinstance(e, RelVarRef):
        a = 0
        gamma = TypeContext(frozenset([e.name]), frozenset([a]), {e.name: frozenset([a])})
        phi = TypeFormula(gamma, e, frozenset([a]), {})
    elif isinstance(e, BINARY):
        phi = _binary(e, _infer(e.left, early), _infer(e.right, early), early)
    else:
        phi = _unary(e, _infer(e.arg, early), early)
    assert outvar_invariant_holds(phi), f"output-variable invariant broken at {e}"
    return phi


def _tag(phi: TypeFormula, side: str) -> TypeFormula:
    m = lambda vs: frozenset((side, v) for v in vs)
    g = phi.context
    gamma = replace(g, typevars=m(g.typevars), decl={r: m(t) for r, t in g.decl.items()})
    return replace(phi, context=gamma, outvars=m(phi.outvars))


def _binary(e: Expr, phi1: TypeFormula, phi2: TypeFormula, early: bool) -> TypeFormula:
    # step 1: bring both sides to the same special attributes
    for A in sorted(phi1.context.specattrs - phi2.context.specattrs):
        phi2 = extend_with_attribute(phi2, A)
    for A in sorted(phi2.context.specattrs - phi1.context.specattrs):
        phi1 = extend_with_attribute(phi1, A)

    # step 2: make the type variables apart, then solve
    phi1, phi2 = _tag(phi1, "L"), _tag(phi2, "R")
    g1, g2 = phi1.context, phi2.context
    eqs = [(g1.decl[r], g2.decl[r]) for r in sorted(g1.relvars & g2.relvars)]
    if isinstance(e, (Union_, Difference)):
        eqs.append((phi1.outvars, phi2.outvars))
    forced = ()
    if isinstance(e, Product):
        forced = list(itertools.product(phi1.outvars, phi2.outvars))
    sol = solve(EquationSystem(g1.typevars, g2.typevars, tuple(eqs)), forced)

    # number the surviving fresh variables 0..n-1 to keep type variables small
    order = sorted(sol.fresh_vars, key=repr)
    num = {c: i for i, c in enumerate(order)}
    sub = lambda vs: frozenset(num[c] for v in vs for c in sol.assignment[v])
    typevars = frozenset(range(len(order)))
    c1 = replace(g1, typevars=typevars, decl={r: sub(t) for r, t in g1.decl.items()})
    c2 = replace(g2, typevars=typevars, decl={r: sub(t) for r, t in g2.decl.items()})
    out1, out2 = sub(phi1.outvars), sub(phi2.outvars)

    # step 3: conjunction
    gamma = conjoin(c1, c2)

    # step 4: output side
    o1, o2 = phi1.outatt, phi2.outatt
    attrs = sorted(gamma.specattrs)
    if isinstance(e, (Union_, Difference)):
        constraint = {A: bf.And(gamma.constraint[A], bf.Iff(o1[A], o2[A])) for A in attrs}
        outatt = dict(o1)
        outvars = out1
    elif isinstance(e, Join):
        constraint = dict(gamma.constraint)
        outatt = {A: bf.Or(o1[A], o2[A]) for A in attrs}
        outvars = out1 | out2
    else:
        constraint = {A: bf.And(gamma.constraint[A], bf.Not(bf.And(o1[A], o2[A]))) for A in attrs}
        outatt = {A: bf.Or(o1[A], o2[A]) for A in attrs}
        outvars = out1 | out2
    gamma = replace(gamma, constraint=constraint)
    _check_sat(gamma, attrs, e, early)
    return TypeFormula(gamma, e, outvars, outatt)


def _unary(e: Expr, phi: TypeFormula, early: bool) -> TypeFormula:
    args = named_attrs(e)
    for A in args:
        if A not in phi.context.specattrs:
            phi = extend_with_attribute(phi, A)
    gamma = phi.context
    constraint = dict(gamma.constraint)
    outatt = dict(phi.outatt)
    outvars = phi.outvars

    for A in args:
        if isinstance(e, Rename) and A == e.dst:
            constraint[A] = bf.And(constraint[A], bf.Not(outatt[A]))
        else:
            constraint[A] = bf.And(constraint[A], outatt[A])

    if isinstance(e, Rename):
        outatt[e.src] = bf.FALSE
        outatt[e.dst] = bf.TRUE
    elif isinstance(e, ProjectOut):
        outatt[e.attr] = bf.FALSE
    else:
        for A in args:
            outatt[A] = bf.TRUE
    if isinstance(e, Project):
        for A in gamma.specattrs - set(args):
            outatt[A] = bf.FALSE
        outvars = frozenset()

    gamma = replace(gamma, constraint=constraint)
    _check_sat(gamma, args, e, early)
    return TypeFormula(gamma, e, outvars, outatt)


def typable(e: Expr) -> bool:
    return context_satisfiable(infer_formula(e).context)


BRUTEFORCE_GUARD = 16


def typable_bruteforce(e: Expr) -> Optional[dict[str, frozenset]]:
    """Search type assignments whose types only use the expression's own attributes.

    Restricting a well-typing assignment to any superset of the special
    attributes keeps it well-typing, so this search space is complete.
    Returns a witness (smallest types first) or None.
    """
    rs = sorted(relvars(e))
    attrs = sorted(specattrs(e))
    if len(rs) * len(attrs) > BRUTEFORCE_GUARD:
        raise ValueError(f"{len(rs)} relations x {len(attrs)} attributes exceeds the "
                         f"brute-force guard of {BRUTEFORCE_GUARD}")
    types = [frozenset(c) for k in range(len(attrs) + 1) for c in itertools.combinations(attrs, k)]
    for combo in itertools.product(types, repeat=len(rs)):
        ta = dict(zip(rs, combo))
        if well_typed(ta, e):
            return ta
    return None


def typevar_count(phi: TypeFormula) -> int:
    return len(phi.context.typevars)

