"""Monomorphic typing: does ``e`` have type tau under a fixed type assignment?"""
from __future__ import annotations

from typing import Iterable, Mapping

from .ra_ast import (
    Difference, Expr, Join, Product, Project, ProjectOut, RelVarRef, Rename,
    Select, Span, Union_, relvars,
)

RelationType = frozenset  # of attribute names
TypeAssignment = Mapping[str, frozenset]


class TypeCheckError(Exception):
    """Raised at the first (leftmost-innermost) node whose typing rule fails."""

    def __init__(self, rule: str, span: Span, message: str):
        self.rule = rule
        self.span = span
        self.message = message
        super().__init__(f"{rule} at {span}: {message}")


def _fmt(attrs: Iterable[str]) -> str:
    return "{" + ",".join(sorted(attrs)) + "}"


def make_assignment(mapping: Mapping[str, Iterable[str]]) -> dict[str, frozenset]:
    return {r: frozenset(attrs) for r, attrs in mapping.items()}


def typecheck(ta: TypeAssignment, e: Expr) -> frozenset:
    missing = relvars(e) - set(ta)
    if missing:
        raise ValueError(f"type assignment has no entry for {sorted(missing)}")
    return _check(ta, e)


def _check(ta, e) -> frozenset:
    if isinstance(e, RelVarRef):
        return ta[e.name]
    if isinstance(e, (Union_, Difference)):
        t1, t2 = _check(ta, e.left), _check(ta, e.right)
        if t1 != t2:
            rule = "union" if isinstance(e, Union_) else "difference"
            raise TypeCheckError(rule, e.span, f"operand types differ: {_fmt(t1)} vs {_fmt(t2)}")
        return t1
    if isinstance(e, Join):
        return _check(ta, e.left) | _check(ta, e.right)
    if isinstance(e, Product):
        t1, t2 = _check(ta, e.left), _check(ta, e.right)
        if t1 & t2:
            raise TypeCheckError("product", e.span, f"product operands overlap on {_fmt(t1 & t2)}")
        return t1 | t2
    t = _check(ta, e.arg)
    if isinstance(e, Select):
        missing = [a for a in e.pred.args if a not in t]
        if missing:
            raise TypeCheckError("selection", e.span, f"{_fmt(missing)} not in operand type {_fmt(t)}")
        return t
    if isinstance(e, Project):
        missing = [a for a in e.attrs if a not in t]
        if missing:
            raise TypeCheckError("projection", e.span, f"{_fmt(missing)} not in operand type {_fmt(t)}")
        return frozenset(e.attrs)
    if isinstance(e, Rename):
        if e.src not in t:
            raise TypeCheckError("renaming", e.span, f"{e.src} not in operand type {_fmt(t)}")
        if e.dst in t:
            raise TypeCheckError("renaming", e.span, f"{e.dst} already in operand type {_fmt(t)}")
        return (t - {e.src}) | {e.dst}
    if isinstance(e, ProjectOut):
        if e.attr not in t:
            raise TypeCheckError("project-out", e.span, f"{e.attr} not in operand type {_fmt(t)}")
        return t - {e.attr}
    raise TypeError(f"not an expression: {e!r}")


def well_typed(ta: TypeAssignment, e: Expr) -> bool:
    try:
        typecheck(ta, e)
    except TypeCheckError:
        return False
    return True


def restrict(ta: TypeAssignment, attrs: Iterable[str]) -> dict[str, frozenset]:
    attrs = frozenset(attrs)
    return {r: t & attrs for r, t in ta.items()}


# -- text format: one ``r: A B C`` line per relation ---------------------------

def parse_assignment(text: str) -> dict[str, frozenset]:
    out: dict[str, frozenset] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, sep, rest = line.partition(":")
        name = name.strip()
        if not sep or not name or not name[0].islower():
            raise ValueError(f"line {lineno}: expected 'r: A B ...', got {raw!r}")
        if name in out:
            raise ValueError(f"line {lineno}: relation {name} listed twice")
        attrs = rest.split()
        if len(set(attrs)) != len(attrs):
            raise ValueError(f"line {lineno}: duplicate attribute for {name}")
        out[name] = frozenset(attrs)
    return out


def render_assignment(ta: TypeAssignment) -> str:
    return "".join(f"{r}: {' '.join(sorted(ta[r]))}".rstrip() + "\n" for r in sorted(ta))
