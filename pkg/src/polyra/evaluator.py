"""Set semantics of well-typed expressions over small in-memory databases."""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Optional

from .ra_ast import (
    Attr, Comparison, Difference, Expr, Join, Product, Project, ProjectOut,
    RelVarRef, Rename, Select, Union_,
)
from .typing_rules import typecheck

Row = frozenset  # of (attribute, value) pairs


def row(**values: str) -> Row:
    return frozenset(values.items())


@dataclass(frozen=True)
class Relation:
    rel_type: frozenset
    rows: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "rel_type", frozenset(self.rel_type))
        object.__setattr__(self, "rows", frozenset(self.rows))
        for t in self.rows:
            if frozenset(a for a, _ in t) != self.rel_type or len(t) != len(self.rel_type):
                raise ValueError(f"row {sorted(t)} does not match type {sorted(self.rel_type)}")


@dataclass(frozen=True)
class Database:
    contents: Mapping[str, Relation]

    @property
    def schema(self) -> dict[str, frozenset]:
        return {r: rel.rel_type for r, rel in self.contents.items()}

    def __hash__(self):
        return hash(tuple(sorted(self.contents.items())))


# -- predicates ----------------------------------------------------------------

def _as_int(v: str) -> Optional[int]:
    try:
        return int(v)
    except ValueError:
        return None


def compare(x: str, op: str, y: str) -> bool:
    if op == "=":
        return x == y
    if op == "!=":
        return x != y
    ix, iy = _as_int(x), _as_int(y)
    if ix is not None and iy is not None:
        x, y = ix, iy
    if op == "<":
        return x < y
    if op == "<=":
        return x <= y
    if op == ">":
        return x > y
    if op == ">=":
        return x >= y
    raise ValueError(f"unknown comparison {op!r}")


def _holds(c: Comparison, values: Mapping[str, str]) -> bool:
    side = lambda o: values[o.name] if isinstance(o, Attr) else o.value
    return compare(side(c.left), c.op, side(c.right))


# -- evaluation ----------------------------------------------------------------

def evaluate(db: Database, e: Expr) -> Relation:
    typecheck(db.schema, e)
    return _eval(db, e)


def _eval(db: Database, e: Expr) -> Relation:
    if isinstance(e, RelVarRef):
        return db.contents[e.name]
    if isinstance(e, (Union_, Difference)):
        a, b = _eval(db, e.left), _eval(db, e.right)
        rows = a.rows | b.rows if isinstance(e, Union_) else a.rows - b.rows
        return Relation(a.rel_type, rows)
    if isinstance(e, (Join, Product)):
        a, b = _eval(db, e.left), _eval(db, e.right)
        shared = a.rel_type & b.rel_type
        rows = set()
        for s in a.rows:
            ds = dict(s)
            key = {k: ds[k] for k in shared}
            for t in b.rows:
                dt = dict(t)
                if all(dt[k] == v for k, v in key.items()):
                    rows.add(s | t)
        return Relation(a.rel_type | b.rel_type, rows)
    a = _eval(db, e.arg)
    if isinstance(e, Select):
        return Relation(a.rel_type, (t for t in a.rows
                                     if all(_holds(c, dict(t)) for c in e.pred.comparisons)))
    if isinstance(e, Project):
        keep = frozenset(e.attrs)
        return Relation(keep, (frozenset(p for p in t if p[0] in keep) for t in a.rows))
    if isinstance(e, Rename):
        return Relation((a.rel_type - {e.src}) | {e.dst},
                        (frozenset((e.dst if k == e.src else k, v) for k, v in t) for t in a.rows))
    if isinstance(e, ProjectOut):
        return Relation(a.rel_type - {e.attr}, (frozenset(p for p in t if p[0] != e.attr) for t in a.rows))
    raise TypeError(f"not an expression: {e!r}")


# -- text format -----------------------------------------------------------------

_HEADER = re.compile(r"relation\s+([a-z][A-Za-z0-9_]*)\s*\(([^)]*)\)\s*$")


def load_database(text: str) -> Database:
    """Read ``relation r (A, B)`` blocks followed by comma-separated rows.

    A nullary relation writes its one possible row as ``()``.
    """
    contents: dict[str, Relation] = {}
    name = None
    header: list[str] = []
    rows: list = []

    def flush():
        if name is not None:
            contents[name] = Relation(frozenset(header), rows)

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("relation"):
            m = _HEADER.match(line)
            if not m:
                raise ValueError(f"line {lineno}: bad relation header {raw!r}")
            flush()
            name = m.group(1)
            if name in contents:
                raise ValueError(f"line {lineno}: relation {name} defined twice")
            header = [a.strip() for a in m.group(2).split(",")] if m.group(2).strip() else []
            if len(set(header)) != len(header):
                raise ValueError(f"line {lineno}: duplicate attribute in header of {name}")
            if not all(re.fullmatch(r"[A-Z][A-Za-z0-9_]*", a) for a in header):
                raise ValueError(f"line {lineno}: bad attribute name in header of {name}")
            rows = []
            continue
        if name is None:
            raise ValueError(f"line {lineno}: row before any relation header")
        values = [] if line == "()" else [v.strip() for v in line.split(",")]
        if len(values) != len(header):
            raise ValueError(f"line {lineno}: {len(values)} values for {len(header)} attributes of {name}")
        rows.append(frozenset(zip(header, values)))
    flush()
    return Database(contents)


def render_relation(name: str, rel: Relation) -> str:
    attrs = sorted(rel.rel_type)
    lines = [f"relation {name} ({', '.join(attrs)})"]
    body = sorted(tuple(dict(t)[a] for a in attrs) for t in rel.rows)
    for vals in body:
        lines.append(", ".join(vals) if attrs else "()")
    return "\n".join(lines) + "\n"


def render_database(db: Database) -> str:
    return "".join(render_relation(r, db.contents[r]) for r in sorted(db.contents))
