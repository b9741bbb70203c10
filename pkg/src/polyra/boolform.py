"""Propositional formulas over relation variables.

Attribute constraints and output conditions of type formulas are Boolean
formulas whose atoms are relation variables.  A subset of relation variables
is read as a truth assignment: members are true, everything else is false.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Union


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


Formula = Union[Const, Var, Not, And, Or, Implies, Iff]

TRUE = Const(True)
FALSE = Const(False)


def conj(*fs: Formula) -> Formula:
    """Left-nested conjunction; the empty conjunction is true."""
    if not fs:
        return TRUE
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


def disj(*fs: Formula) -> Formula:
    """Left-nested disjunction; the empty disjunction is false."""
    if not fs:
        return FALSE
    out = fs[0]
    for f in fs[1:]:
        out = Or(out, f)
    return out


def variables(f: Formula) -> frozenset[str]:
    if isinstance(f, Const):
        return frozenset()
    if isinstance(f, Var):
        return frozenset([f.name])
    if isinstance(f, Not):
        return variables(f.arg)
    return variables(f.left) | variables(f.right)


def evaluate(f: Formula, truthy: Iterable[str]) -> bool:
    """Truth value of ``f`` when exactly the variables in ``truthy`` hold."""
    if not isinstance(truthy, (set, frozenset)):
        truthy = frozenset(truthy)
    return _ev(f, truthy)


def _ev(f: Formula, t) -> bool:
    if isinstance(f, Var):
        return f.name in t
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Not):
        return not _ev(f.arg, t)
    if isinstance(f, And):
        return _ev(f.left, t) and _ev(f.right, t)
    if isinstance(f, Or):
        return _ev(f.left, t) or _ev(f.right, t)
    if isinstance(f, Implies):
        return (not _ev(f.left, t)) or _ev(f.right, t)
    if isinstance(f, Iff):
        return _ev(f.left, t) == _ev(f.right, t)
    raise TypeError(f"not a formula: {f!r}")


def subsets(vs: Iterable[str]) -> Iterator[frozenset[str]]:
    """All subsets of ``vs``, smallest first, in a fixed order."""
    items = sorted(vs)
    for k in range(len(items) + 1):
        for combo in itertools.combinations(items, k):
            yield frozenset(combo)


def models(f: Formula, vs: Iterable[str]) -> list[frozenset[str]]:
    """Every subset of ``vs`` satisfying ``f``."""
    return [s for s in subsets(vs) if _ev(f, s)]


def satisfiable(f: Formula, vs: Iterable[str] = ()) -> bool:
    vs = frozenset(vs) | variables(f)
    return any(_ev(f, s) for s in subsets(vs))


def equivalent(f: Formula, g: Formula, vs: Iterable[str] = ()) -> bool:
    vs = frozenset(vs) | variables(f) | variables(g)
    return all(_ev(f, s) == _ev(g, s) for s in subsets(vs))


def simplify(f: Formula) -> Formula:
    """Cheap local rewriting for display.  Not a normal form."""
    if isinstance(f, (Const, Var)):
        return f
    if isinstance(f, Not):
        a = simplify(f.arg)
        if isinstance(a, Const):
            return Const(not a.value)
        if isinstance(a, Not):
            return a.arg
        return Not(a)
    a, b = simplify(f.left), simplify(f.right)
    if isinstance(f, And):
        if a == FALSE or b == FALSE:
            return FALSE
        if a == TRUE:
            return b
        if b == TRUE or a == b:
            return a
        if Not(a) == b or Not(b) == a:
            return FALSE
        return And(a, b)
    if isinstance(f, Or):
        if a == TRUE or b == TRUE:
            return TRUE
        if a == FALSE:
            return b
        if b == FALSE or a == b:
            return a
        if Not(a) == b or Not(b) == a:
            return TRUE
        return Or(a, b)
    if isinstance(f, Implies):
        if a == FALSE or b == TRUE or a == b:
            return TRUE
        if a == TRUE:
            return b
        if b == FALSE:
            return simplify(Not(a))
        return Implies(a, b)
    if isinstance(f, Iff):
        if a == b:
            return TRUE
        if a == TRUE:
            return b
        if b == TRUE:
            return a
        if a == FALSE:
            return simplify(Not(b))
        if b == FALSE:
            return simplify(Not(a))
        return Iff(a, b)
    raise TypeError(f"not a formula: {f!r}")


# -- text form ---------------------------------------------------------------
# precedence, loosest first: <->, ->, |, &, !

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}
_SYM = {Iff: "<->", Implies: "->", Or: "|", And: "&"}


def render(f: Formula) -> str:
    return _render(f, 0)


def _render(f: Formula, ctx: int) -> str:
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Var):
        return f.name
    if isinstance(f, Not):
        return "!" + _render(f.arg, 5)
    p = _PREC[type(f)]
    if isinstance(f, (And, Or)):
        # associative: a left operand of the same kind needs no parentheses
        text = f"{_render(f.left, p)} {_SYM[type(f)]} {_render(f.right, p + 1)}"
    else:
        # arrows associate to the right
        text = f"{_render(f.left, p + 1)} {_SYM[type(f)]} {_render(f.right, p)}"
    return f"({text})" if p < ctx else text


class FormulaSyntaxError(ValueError):
    pass


_TOKEN = re.compile(r"\s*(?:(<->|->|[!&|()])|([A-Za-z_][A-Za-z0-9_]*))")


def _tokenize(text: str) -> list[str]:
    out, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        out.append(m.group(1) or m.group(2))
        pos = m.end()
    return out


def parse(text: str) -> Formula:
    toks = _tokenize(text)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else None

    def take(expected=None):
        nonlocal pos
        tok = peek()
        if tok is None or (expected is not None and tok != expected):
            raise FormulaSyntaxError(f"expected {expected or 'a formula'}, got {tok!r} in {text!r}")
        pos += 1
        return tok

    def iff():
        left = imp()
        if peek() == "<->":
            take()
            return Iff(left, iff())
        return left

    def imp():
        left = orr()
        if peek() == "->":
            take()
            return Implies(left, imp())
        return left

    def orr():
        left = andd()
        while peek() == "|":
            take()
            left = Or(left, andd())
        return left

    def andd():
        left = unary()
        while peek() == "&":
            take()
            left = And(left, unary())
        return left

    def unary():
        tok = take()
        if tok == "!":
            return Not(unary())
        if tok == "(":
            inner = iff()
            take(")")
            return inner
        if tok == "true":
            return TRUE
        if tok == "false":
            return FALSE
        if tok in ("&", "|", "->", "<->", ")"):
            raise FormulaSyntaxError(f"unexpected {tok!r} in {text!r}")
        return Var(tok)

    f = iff()
    if peek() is not None:
        raise FormulaSyntaxError(f"trailing input {peek()!r} in {text!r}")
    return f
