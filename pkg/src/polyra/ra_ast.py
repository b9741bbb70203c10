"""Relational algebra expressions: AST, concrete syntax, parser and printer.

Concrete syntax::

    e ::= r
        | (e union e) | (e minus e) | (e join e) | (e times e)
        | select[PRED](e) | project[A1,...,An](e) | rename[A/B](e) | projout[A](e)

Relation variables start with a lowercase letter, attribute names with an
uppercase one.  A selection predicate is a ``&``-conjunction of comparisons
``X op Y`` with ``op`` in ``= != < <= > >=``; each side is an attribute, a
quoted string or a number.

The parser also accepts a single unparenthesized binary operation where the
surrounding brackets already delimit it (the whole input, or the argument of a
unary operator), e.g. ``select[B=C]((rename[A/B](r) union s) join u)``.
Rendering always emits the fully parenthesized form.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Union


@dataclass(frozen=True)
class Span:
    start: int
    end: int

    def __str__(self) -> str:
        return f"{self.start}..{self.end}"


NOSPAN = Span(0, 0)


# -- predicates --------------------------------------------------------------

@dataclass(frozen=True)
class Attr:
    name: str


@dataclass(frozen=True)
class Literal:
    value: str
    quoted: bool = True


Operand = Union[Attr, Literal]

COMPARISONS = ("=", "!=", "<", "<=", ">", ">=")


@dataclass(frozen=True)
class Comparison:
    left: Operand
    op: str
    right: Operand


@dataclass(frozen=True)
class Predicate:
    """A conjunction of comparisons; ``args`` are the attributes it mentions."""

    comparisons: tuple[Comparison, ...]

    @property
    def args(self) -> tuple[str, ...]:
        seen: list[str] = []
        for c in self.comparisons:
            for side in (c.left, c.right):
                if isinstance(side, Attr) and side.name not in seen:
                    seen.append(side.name)
        return tuple(seen)

    def literals(self) -> set[str]:
        return {s.value for c in self.comparisons for s in (c.left, c.right)
                if isinstance(s, Literal)}


# -- expressions -------------------------------------------------------------

@dataclass(frozen=True)
class RelVarRef:
    name: str
    span: Span = field(default=NOSPAN, compare=False, repr=False)


@dataclass(frozen=True)
class Union_:
    left: "Expr"
    right: "Expr"
    span: Span = field(default=NOSPAN, compare=False, repr=False)


@dataclass(frozen=True)
class Difference:
    left: "Expr"
    right: "Expr"
    span: Span = field(default=NOSPAN, compare=False, repr=False)


@dataclass(frozen=True)
class Join:
    left: "Expr"
    right: "Expr"
    span: Span = field(default=NOSPAN, compare=False, repr=False)


@dataclass(frozen=True)
class Product:
    left: "Expr"
    right: "Expr"
    span: Span = field(default=NOSPAN, compare=False, repr=False)


@dataclass(frozen=True)
class Select:
    pred: Predicate
    arg: "Expr"
    span: Span = field(default=NOSPAN, compare=False, repr=False)


@dataclass(frozen=True)
class Project:
    attrs: tuple[str, ...]
    arg: "Expr"
    span: Span = field(default=NOSPAN, compare=False, repr=False)

    def __post_init__(self):
        if len(set(self.attrs)) != len(self.attrs):
            raise ValueError(f"duplicate attribute in projection list {list(self.attrs)}")


@dataclass(frozen=True)
class Rename:
    src: str
    dst: str
    arg: "Expr"
    span: Span = field(default=NOSPAN, compare=False, repr=False)

    def __post_init__(self):
        if self.src == self.dst:
            raise ValueError(f"rename of {self.src} onto itself")


@dataclass(frozen=True)
class ProjectOut:
    attr: str
    arg: "Expr"
    span: Span = field(default=NOSPAN, compare=False, repr=False)


Expr = Union[RelVarRef, Union_, Difference, Join, Product, Select, Project, Rename, ProjectOut]
BINARY = (Union_, Difference, Join, Product)
UNARY = (Select, Project, Rename, ProjectOut)

_KEYWORD = {Union_: "union", Difference: "minus", Join: "join", Product: "times"}
_BINOP = {v: k for k, v in _KEYWORD.items()}


def relvars(e: Expr) -> frozenset[str]:
    if isinstance(e, RelVarRef):
        return frozenset([e.name])
    if isinstance(e, BINARY):
        return relvars(e.left) | relvars(e.right)
    return relvars(e.arg)


def named_attrs(e: Expr) -> tuple[str, ...]:
    """Attributes written at a unary node, in order of appearance."""
    if isinstance(e, Select):
        return e.pred.args
    if isinstance(e, Project):
        return e.attrs
    if isinstance(e, Rename):
        return (e.src, e.dst)
    if isinstance(e, ProjectOut):
        return (e.attr,)
    return ()


def specattrs(e: Expr) -> frozenset[str]:
    """Attribute names explicitly occurring in ``e``."""
    if isinstance(e, RelVarRef):
        return frozenset()
    if isinstance(e, BINARY):
        return specattrs(e.left) | specattrs(e.right)
    return specattrs(e.arg) | frozenset(named_attrs(e))


def subexpressions(e: Expr):
    """Post-order traversal."""
    if isinstance(e, BINARY):
        yield from subexpressions(e.left)
        yield from subexpressions(e.right)
    elif isinstance(e, UNARY):
        yield from subexpressions(e.arg)
    yield e


# -- printing ----------------------------------------------------------------

def _render_operand(o: Operand) -> str:
    if isinstance(o, Attr):
        return o.name
    if o.quoted:
        return '"' + o.value.replace("\\", "\\\\").replace('"', '\\"') + '"'
    return o.value


def render_predicate(p: Predicate) -> str:
    return " & ".join(
        f"{_render_operand(c.left)}{c.op}{_render_operand(c.right)}" for c in p.comparisons
    )


def render_expr(e: Expr) -> str:
    if isinstance(e, RelVarRef):
        return e.name
    if isinstance(e, BINARY):
        return f"({render_expr(e.left)} {_KEYWORD[type(e)]} {render_expr(e.right)})"
    if isinstance(e, Select):
        return f"select[{render_predicate(e.pred)}]({render_expr(e.arg)})"
    if isinstance(e, Project):
        return f"project[{','.join(e.attrs)}]({render_expr(e.arg)})"
    if isinstance(e, Rename):
        return f"rename[{e.src}/{e.dst}]({render_expr(e.arg)})"
    if isinstance(e, ProjectOut):
        return f"projout[{e.attr}]({render_expr(e.arg)})"
    raise TypeError(f"not an expression: {e!r}")


# -- parsing -----------------------------------------------------------------

class ParseError(ValueError):
    def __init__(self, message: str, pos: int, expected: Optional[str] = None):
        self.pos = pos
        self.expected = expected
        hint = f" (expected {expected})" if expected else ""
        super().__init__(f"byte {pos}: {message}{hint}")


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<str>"(?:[^"\\]|\\.)*")
  | (?P<num>-?\d+(?:\.\d+)?)
  | (?P<lower>[a-z][A-Za-z0-9_]*)
  | (?P<upper>[A-Z][A-Za-z0-9_]*)
  | (?P<op><=|>=|!=|[=<>])
  | (?P<punct>[()\[\],/&])
    """,
    re.VERBOSE,
)

UNARY_KEYWORDS = ("select", "project", "rename", "projout")
RESERVED = frozenset(UNARY_KEYWORDS) | frozenset(_BINOP) | {"true", "false"}


@dataclass
class _Tok:
    kind: str
    text: str
    start: int  # byte offsets
    end: int


def _tokenize(text: str) -> list[_Tok]:
    # byte offset of every character position, plus the end
    offsets = [0]
    for ch in text:
        offsets.append(offsets[-1] + len(ch.encode("utf-8")))
    toks, pos = [], 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", offsets[pos])
        kind = m.lastgroup
        if kind != "ws":
            toks.append(_Tok(kind, m.group(), offsets[pos], offsets[m.end()]))
        pos = m.end()
    toks.append(_Tok("eof", "", offsets[-1], offsets[-1]))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def advance(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> _Tok:
        if self.tok.text != text or self.tok.kind in ("str", "eof"):
            raise ParseError(f"unexpected {self.tok.text or 'end of input'!r}", self.tok.start, repr(text))
        return self.advance()

    def top(self) -> Expr:
        e = self.seq()
        if self.tok.kind != "eof":
            raise ParseError(f"unexpected {self.tok.text!r}", self.tok.start, "end of input")
        return e

    def seq(self) -> Expr:
        # operand [binop operand]; chaining requires explicit parentheses
        left = self.atom()
        if self.tok.kind == "lower" and self.tok.text in _BINOP:
            cls = _BINOP[self.advance().text]
            right = self.atom()
            if self.tok.kind == "lower" and self.tok.text in _BINOP:
                raise ParseError("binary operators must be parenthesized", self.tok.start, "')'")
            return cls(left, right, Span(left.span.start, right.span.end))
        return left

    def atom(self) -> Expr:
        t = self.tok
        if t.text == "(" and t.kind == "punct":
            self.advance()
            inner = self.seq()
            close = self.expect(")")
            return _respan(inner, Span(t.start, close.end))
        if t.kind == "lower":
            if t.text in UNARY_KEYWORDS:
                return self.unary()
            if t.text in RESERVED:
                raise ParseError(f"keyword {t.text!r} cannot start an expression", t.start,
                                 "relation variable, '(' or unary operator")
            self.advance()
            return RelVarRef(t.text, Span(t.start, t.end))
        raise ParseError(f"unexpected {t.text or 'end of input'!r}", t.start,
                         "relation variable, '(' or unary operator")

    def attr(self) -> str:
        t = self.tok
        if t.kind != "upper":
            raise ParseError(f"unexpected {t.text or 'end of input'!r}", t.start, "attribute name")
        self.advance()
        return t.text

    def unary(self) -> Expr:
        kw = self.advance()
        self.expect("[")
        if kw.text == "select":
            pred = self.predicate()
        elif kw.text == "project":
            attrs: list[str] = []
            if self.tok.text != "]":
                attrs.append(self.attr())
                while self.tok.text == ",":
                    self.advance()
                    at = self.tok.start
                    a = self.attr()
                    if a in attrs:
                        raise ParseError(f"duplicate attribute {a} in projection", at)
                    attrs.append(a)
        elif kw.text == "rename":
            src = self.attr()
            self.expect("/")
            at = self.tok.start
            dst = self.attr()
            if src == dst:
                raise ParseError(f"rename of {src} onto itself", at)
        else:
            attr = self.attr()
        self.expect("]")
        self.expect("(")
        arg = self.seq()
        close = self.expect(")")
        span = Span(kw.start, close.end)
        if kw.text == "select":
            return Select(pred, arg, span)
        if kw.text == "project":
            return Project(tuple(attrs), arg, span)
        if kw.text == "rename":
            return Rename(src, dst, arg, span)
        return ProjectOut(attr, arg, span)

    def predicate(self) -> Predicate:
        comps = [self.comparison()]
        while self.tok.text == "&":
            self.advance()
            comps.append(self.comparison())
        pred = Predicate(tuple(comps))
        if not pred.args:
            raise ParseError("selection predicate mentions no attribute", self.tok.start, "attribute name")
        return pred

    def operand(self) -> Operand:
        t = self.tok
        if t.kind == "upper":
            self.advance()
            return Attr(t.text)
        if t.kind == "num":
            self.advance()
            return Literal(t.text, quoted=False)
        if t.kind == "str":
            self.advance()
            body = re.sub(r"\\(.)", r"\1", t.text[1:-1])
            return Literal(body, quoted=True)
        raise ParseError(f"unexpected {t.text or 'end of input'!r}", t.start, "attribute or literal")

    def comparison(self) -> Comparison:
        left = self.operand()
        if self.tok.kind != "op":
            raise ParseError(f"unexpected {self.tok.text or 'end of input'!r}", self.tok.start,
                             "comparison operator")
        op = self.advance().text
        return Comparison(left, op, self.operand())


def _respan(e: Expr, span: Span) -> Expr:
    if isinstance(e, BINARY):
        return type(e)(e.left, e.right, span)
    return e


def parse_expr(text: str) -> Expr:
    return _Parser(text).top()
