"""Bounded refutation of polymorphic equivalence.

Two expressions are polymorphically equivalent when they are well-typed under
the same type assignments, with the same output types, and agree on every
database of every such assignment.  ``poly_equiv_bounded`` checks this over a
finite slice: type assignments over the special attributes plus a few fresh
ones, and databases with few rows over few values.

The search is exhaustive up to symmetries that commute with evaluation:

* fresh attributes are never mentioned, so permuting their names maps
  assignments to equivalent ones (one assignment per orbit is checked);
* a fresh attribute's column is only ever compared for equality with the
  same column elsewhere, so permuting the values in that column alone is
  harmless; when no predicate uses a literal or an ordering, the same holds
  for one permutation applied to all special-attribute columns at once.

Databases are enumerated as lexicographically least members of their orbit.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from operator import itemgetter
from typing import Callable, Mapping, Optional, Union

from .evaluator import Database, Relation, compare
from .ra_ast import (
    Attr, Difference, Expr, Join, Product, Project, ProjectOut, RelVarRef,
    Rename, Select, Union_, relvars, specattrs, subexpressions,
)
from .type_formulas import fresh_attributes
from .typing_rules import TypeCheckError, typecheck

MAX_ATTRS, MAX_VALUES, MAX_ROWS = 4, 3, 2


@dataclass(frozen=True)
class Equivalent:
    checked_assignments: int
    checked_databases: int


@dataclass(frozen=True)
class Counterexample:
    schema: Mapping[str, frozenset]
    database: Optional[Database] = None
    reason: str = ""


def poly_equiv_bounded(
    e1: Expr,
    e2: Expr,
    attr_budget: int = 2,
    value_budget: int = 2,
    max_rows: int = 2,
) -> Union[Equivalent, Counterexample]:
    """Look for a witness that ``e1`` and ``e2`` are not polymorphically equivalent.

    Assignments are visited by ascending total type size, databases by
    ascending row count.  A database on which the results differ is
    preferred over an assignment typing only one of the two expressions; the
    latter is returned only when no such database exists within the bounds.
    The value pool is the predicates' literals padded with ``v0, v1, ...``,
    truncated to ``value_budget``.
    """
    if relvars(e1) != relvars(e2):
        raise ValueError("expressions use different relation variables")
    if attr_budget > MAX_ATTRS or value_budget > MAX_VALUES or max_rows > MAX_ROWS:
        raise ValueError(f"budgets exceed attrs {MAX_ATTRS}, values {MAX_VALUES}, rows {MAX_ROWS}")
    rs = sorted(relvars(e1))
    special = specattrs(e1) | specattrs(e2)
    fresh = fresh_attributes(attr_budget, special)
    universe = sorted(special) + fresh
    values = value_pool(e1, e2, value_budget)
    generic = _generic(e1) and _generic(e2)

    mismatch = None
    n_ta = n_db = 0
    for ta in _assignments(rs, universe):
        if not _least_under_fresh_renaming(ta, rs, fresh):
            continue
        t1, t2 = _type_or_none(ta, e1), _type_or_none(ta, e2)
        if t1 != t2:
            if mismatch is None:
                if t1 is None or t2 is None:
                    which = "first" if t2 is None else "second"
                    mismatch = Counterexample(ta, None, f"well-typed only for the {which} expression")
                else:
                    mismatch = Counterexample(ta, None, "output types differ")
            continue
        if t1 is None:
            continue
        n_ta += 1
        found, checked = _search_databases(ta, rs, e1, e2, values, max_rows, special, generic)
        n_db += checked
        if found is not None:
            return Counterexample(ta, found, "results differ")
    if mismatch is not None:
        return mismatch
    return Equivalent(n_ta, n_db)


def _type_or_none(ta, e):
    try:
        return typecheck(ta, e)
    except TypeCheckError:
        return None


def _assignments(rs, universe):
    types = [frozenset(c) for k in range(len(universe) + 1)
             for c in itertools.combinations(universe, k)]
    combos = itertools.product(types, repeat=len(rs))
    for combo in sorted(combos, key=lambda c: (sum(map(len, c)), [sorted(t) for t in c])):
        yield dict(zip(rs, combo))


def _least_under_fresh_renaming(ta, rs, fresh) -> bool:
    sigs = [tuple(f in ta[r] for r in rs) for f in fresh]
    return sigs == sorted(sigs, reverse=True)


def _selections(e: Expr):
    return [sub for sub in subexpressions(e) if isinstance(sub, Select)]


def _generic(e: Expr) -> bool:
    return all(c.op in ("=", "!=") and isinstance(c.left, Attr) and isinstance(c.right, Attr)
               for sel in _selections(e) for c in sel.pred.comparisons)


def value_pool(e1: Expr, e2: Expr, budget: int) -> list[str]:
    lits = set()
    for e in (e1, e2):
        for sel in _selections(e):
            lits |= sel.pred.literals()
    pool = sorted(lits)
    i = 0
    while len(pool) < budget:
        if f"v{i}" not in lits:
            pool.append(f"v{i}")
        i += 1
    return pool[:budget]


# -- compiled evaluation over tuple rows ------------------------------------------
# A relation is a frozenset of value tuples aligned with its sorted attributes.

def _getter(idxs) -> Callable[[tuple], tuple]:
    idxs = tuple(idxs)
    if not idxs:
        return lambda t: ()
    if len(idxs) == 1:
        i = idxs[0]
        return lambda t: (t[i],)
    return itemgetter(*idxs)


def compile_expr(e: Expr, ta: Mapping[str, frozenset], rs: list[str], cache: dict):
    """Return (attributes, fn) where fn maps a tuple of relations (one per
    entry of ``rs``, tuple-row encoded) to the result.  Subexpressions that
    read only some relations memoize on them in ``cache``."""
    index = {r: i for i, r in enumerate(rs)}

    def build(e):
        reads = tuple(index[r] for r in sorted(relvars(e)))
        if isinstance(e, RelVarRef):
            i = index[e.name]
            return tuple(sorted(ta[e.name])), (lambda combo: combo[i])
        if isinstance(e, (Union_, Difference, Join, Product)):
            la, lf = build(e.left)
            ra, rf = build(e.right)
            if isinstance(e, Union_):
                attrs, core = la, (lambda combo: lf(combo) | rf(combo))
            elif isinstance(e, Difference):
                attrs, core = la, (lambda combo: lf(combo) - rf(combo))
            else:
                attrs, core = _join(la, lf, ra, rf)
        else:
            aa, af = build(e.arg)
            attrs, core = _unary(e, aa, af)
        if len(reads) == len(rs):
            return attrs, core
        key = id(e)

        def memo(combo, core=core, key=key, reads=reads):
            k = (key,) + tuple(combo[i] for i in reads)
            hit = cache.get(k)
            if hit is None:
                hit = cache[k] = core(combo)
            return hit
        return attrs, memo

    return build(e)


def _join(la, lf, ra, rf):
    shared = sorted(set(la) & set(ra))
    lkey = _getter(la.index(a) for a in shared)
    rkey = _getter(ra.index(a) for a in shared)
    attrs = tuple(sorted(set(la) | set(ra)))
    # output columns drawn from the concatenation of a left and a right row
    pick = _getter(la.index(a) if a in la else len(la) + ra.index(a) for a in attrs)

    def fn(combo):
        left, right = lf(combo), rf(combo)
        if not left or not right:
            return frozenset()
        if not shared:
            return frozenset(pick(s + t) for s in left for t in right)
        buckets: dict = {}
        for t in right:
            buckets.setdefault(rkey(t), []).append(t)
        return frozenset(pick(s + t) for s in left for t in buckets.get(lkey(s), ()))
    return attrs, fn


def _unary(e, aa, af):
    if isinstance(e, Select):
        tests = []
        for c in e.pred.comparisons:
            left = ("a", aa.index(c.left.name)) if isinstance(c.left, Attr) else ("l", c.left.value)
            right = ("a", aa.index(c.right.name)) if isinstance(c.right, Attr) else ("l", c.right.value)
            tests.append((left, c.op, right))

        def keep(t):
            for (lk, lv), op, (rk, rv) in tests:
                x = t[lv] if lk == "a" else lv
                y = t[rv] if rk == "a" else rv
                if not compare(x, op, y):
                    return False
            return True
        return aa, (lambda combo: frozenset(t for t in af(combo) if keep(t)))
    if isinstance(e, Project):
        attrs = tuple(sorted(e.attrs))
        g = _getter(aa.index(a) for a in attrs)
        return attrs, (lambda combo: frozenset(g(t) for t in af(combo)))
    if isinstance(e, Rename):
        renamed = [e.dst if a == e.src else a for a in aa]
        attrs = tuple(sorted(renamed))
        g = _getter(renamed.index(a) for a in attrs)
        return attrs, (lambda combo: frozenset(g(t) for t in af(combo)))
    if isinstance(e, ProjectOut):
        attrs = tuple(a for a in aa if a != e.attr)
        g = _getter(aa.index(a) for a in attrs)
        return attrs, (lambda combo: frozenset(g(t) for t in af(combo)))
    raise TypeError(f"not an expression: {e!r}")


# -- database enumeration up to value symmetry -------------------------------------

def _candidates(attrs: tuple, values: list[str], max_rows: int) -> list[frozenset]:
    tuples = list(itertools.product(values, repeat=len(attrs)))
    return [frozenset(c) for k in range(max_rows + 1) for c in itertools.combinations(tuples, k)]


def _value_symmetries(ta, rs, values, special, generic):
    """Group elements as {attribute: permutation dict}; attributes absent are fixed."""
    used = sorted(frozenset().union(*(ta[r] for r in rs)))
    classes = [[a] for a in used if a not in special]
    spec_used = [a for a in used if a in special]
    if generic and spec_used:
        classes.append(spec_used)
    perms = [dict(zip(values, p)) for p in itertools.permutations(values)]
    group = []
    for choice in itertools.product(perms, repeat=len(classes)):
        g = {}
        for cls, perm in zip(classes, choice):
            for a in cls:
                g[a] = perm
        group.append(g)
    return group


def _search_databases(ta, rs, e1, e2, values, max_rows, special, generic):
    attrs = [tuple(sorted(ta[r])) for r in rs]
    cands = [_candidates(a, values, max_rows) for a in attrs]
    pos = [{rel: i for i, rel in enumerate(c)} for c in cands]
    group = _value_symmetries(ta, rs, values, special, generic)
    identity = {v: v for v in values}
    col_perms = [[tuple(g.get(a, identity) for a in attrs[lvl]) for g in group] for lvl in range(len(rs))]
    images: dict = {}

    def act(lvl, gi, idx):
        k = (lvl, gi, idx)
        im = images.get(k)
        if im is None:
            perm = col_perms[lvl][gi]
            rel = frozenset(tuple(p[v] for p, v in zip(perm, t)) for t in cands[lvl][idx])
            im = images[k] = pos[lvl][rel]
        return im

    by_size = [[[i for i, rel in enumerate(c) if len(rel) == k] for k in range(max_rows + 1)]
               for c in cands]

    def reps(lvl, stab, sizes, prefix):
        if lvl == len(rs):
            yield prefix
            return
        for idx in by_size[lvl][sizes[lvl]]:
            kept = []
            for gi in stab:
                im = act(lvl, gi, idx)
                if im < idx:
                    break
                if im == idx:
                    kept.append(gi)
            else:
                yield from reps(lvl + 1, kept, sizes, prefix + (idx,))

    cache: dict = {}
    _, f1 = compile_expr(e1, ta, rs, cache)
    _, f2 = compile_expr(e2, ta, rs, cache)
    checked = 0
    everything = list(range(len(group)))
    for total in range(max_rows * len(rs) + 1):
        for sizes in itertools.product(range(max_rows + 1), repeat=len(rs)):
            if sum(sizes) != total:
                continue
            for combo_idx in reps(0, everything, sizes, ()):
                combo = tuple(cands[lvl][i] for lvl, i in enumerate(combo_idx))
                checked += 1
                if f1(combo) != f2(combo):
                    return _to_database(rs, attrs, combo), checked
    return None, checked


def _to_database(rs, attrs, combo) -> Database:
    return Database({
        r: Relation(frozenset(a), (frozenset(zip(a, t)) for t in rel))
        for r, a, rel in zip(rs, attrs, combo)
    })
