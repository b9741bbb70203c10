"""Type contexts, instantiations and type formulas.

A type context declares each relation variable as a union of type variables,
and constrains each special attribute by a Boolean formula over the relation
variables (the formula says which relations may carry that attribute).  An
instantiation picks pairwise disjoint, special-attribute-free types for the
type variables and, for every special attribute, a set of relations satisfying
its constraint.  The image of a context under an instantiation is a concrete
type assignment.  A type formula adds the output side: the type variables
making up the output type, and per special attribute an output condition.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field, replace
from typing import Hashable, Iterable, Iterator, Mapping, Optional

from . import boolform as bf
from .ra_ast import Expr, relvars as expr_relvars, specattrs as expr_specattrs

TypeVar = Hashable


@dataclass(frozen=True)
class TypeContext:
    relvars: frozenset
    typevars: frozenset
    decl: Mapping[str, frozenset] = field(hash=False)
    specattrs: frozenset = frozenset()
    constraint: Mapping[str, bf.Formula] = field(default_factory=dict, hash=False)

    def __post_init__(self):
        if set(self.decl) != set(self.relvars):
            raise ValueError("decl must be defined on exactly the relation variables")
        for r, tvs in self.decl.items():
            if not tvs <= self.typevars:
                raise ValueError(f"decl({r}) mentions undeclared type variables")
        if set(self.constraint) != set(self.specattrs):
            raise ValueError("constraint must be defined on exactly the special attributes")


@dataclass(frozen=True)
class TypeFormula:
    context: TypeContext
    expr: Optional[Expr]
    outvars: frozenset
    outatt: Mapping[str, bf.Formula] = field(hash=False)

    def __post_init__(self):
        if not self.outvars <= self.context.typevars:
            raise ValueError("output variables must be type variables of the context")
        if set(self.outatt) != set(self.context.specattrs):
            raise ValueError("outatt must be defined on exactly the special attributes")
        if self.expr is not None:
            if expr_relvars(self.expr) != self.context.relvars:
                raise ValueError("expression and context disagree on relation variables")
            if not expr_specattrs(self.expr) <= self.context.specattrs:
                raise ValueError("expression mentions attributes that are not special")


@dataclass(frozen=True)
class Instantiation:
    var_types: Mapping[TypeVar, frozenset] = field(hash=False)
    attr_sets: Mapping[str, frozenset] = field(hash=False)


class InvalidInstantiation(ValueError):
    pass


def check_instantiation(gamma: TypeContext, inst: Instantiation) -> None:
    if set(inst.var_types) != set(gamma.typevars):
        raise InvalidInstantiation("var_types must cover exactly the type variables")
    if set(inst.attr_sets) != set(gamma.specattrs):
        raise InvalidInstantiation("attr_sets must cover exactly the special attributes")
    seen: set = set()
    for a in sorted(gamma.typevars, key=_tv_key):
        t = inst.var_types[a]
        if t & gamma.specattrs:
            raise InvalidInstantiation(f"type variable {a} instantiated with special attribute(s) "
                                       f"{sorted(t & gamma.specattrs)}")
        if seen & t:
            raise InvalidInstantiation(f"type variable {a} overlaps another on {sorted(seen & t)}")
        seen |= t
    for A in sorted(gamma.specattrs):
        s = inst.attr_sets[A]
        if not s <= gamma.relvars:
            raise InvalidInstantiation(f"attr_sets({A}) mentions unknown relations")
        if not bf.evaluate(gamma.constraint[A], s):
            raise InvalidInstantiation(f"attr_sets({A}) = {sorted(s)} violates constraint({A})")


def image(gamma: TypeContext, inst: Instantiation) -> dict[str, frozenset]:
    check_instantiation(gamma, inst)
    out = {}
    for r in gamma.relvars:
        t = set()
        for a in gamma.decl[r]:
            t |= inst.var_types[a]
        t |= {A for A in gamma.specattrs if r in inst.attr_sets[A]}
        out[r] = frozenset(t)
    return out


def output_type(phi: TypeFormula, inst: Instantiation) -> frozenset:
    check_instantiation(phi.context, inst)
    t = set()
    for a in phi.outvars:
        t |= inst.var_types[a]
    t |= {A for A in phi.context.specattrs if bf.evaluate(phi.outatt[A], inst.attr_sets[A])}
    return frozenset(t)


def context_satisfiable(gamma: TypeContext) -> bool:
    # Special attributes are constrained independently of each other and the
    # type variables can always be instantiated (e.g. all empty), so the
    # context has an instantiation iff every constraint is satisfiable alone.
    return all(bf.satisfiable(gamma.constraint[A], gamma.relvars) for A in gamma.specattrs)


def outvar_invariant_holds(phi: TypeFormula) -> bool:
    """Every output variable lies in some decl(r) that is itself within the output variables."""
    decl = phi.context.decl
    covered = set()
    for r, tvs in decl.items():
        if tvs <= phi.outvars:
            covered |= tvs
    return phi.outvars <= covered


# -- the two subroutines of the inference algorithm ---------------------------

def extend_with_attribute(phi: TypeFormula, A: str) -> TypeFormula:
    """Make ``A`` special without changing the meaning of ``phi``.

    Where ``A`` used to hide inside some type variable ``a``, it is now carried
    by exactly the relations declared with ``a``.
    """
    gamma = phi.context
    if A in gamma.specattrs:
        raise ValueError(f"{A} is already a special attribute")
    rs = sorted(gamma.relvars)
    regions = [
        bf.conj(*(bf.Var(r) if a in gamma.decl[r] else bf.Not(bf.Var(r)) for r in rs))
        for a in sorted(gamma.typevars, key=_tv_key)
    ]
    constraint = bf.Implies(bf.disj(*(bf.Var(r) for r in rs)), bf.disj(*regions))
    out = bf.disj(*(bf.Var(r) for r in rs if gamma.decl[r] <= phi.outvars))
    new_gamma = replace(
        gamma,
        specattrs=gamma.specattrs | {A},
        constraint={**gamma.constraint, A: constraint},
    )
    return replace(phi, context=new_gamma, outatt={**phi.outatt, A: out})


class IncompatibleContexts(ValueError):
    pass


def conjoin(g1: TypeContext, g2: TypeContext) -> TypeContext:
    if g1.typevars != g2.typevars:
        raise IncompatibleContexts("contexts have different type variables")
    for r in sorted(g1.relvars & g2.relvars):
        if g1.decl[r] != g2.decl[r]:
            raise IncompatibleContexts(f"declarations of {r} differ")
    if g1.specattrs != g2.specattrs:
        raise IncompatibleContexts("contexts have different special attributes")
    return TypeContext(
        relvars=g1.relvars | g2.relvars,
        typevars=g1.typevars,
        decl={**g1.decl, **g2.decl},
        specattrs=g1.specattrs,
        constraint={A: bf.And(g1.constraint[A], g2.constraint[A]) for A in g1.specattrs},
    )


def rename_typevars(phi: TypeFormula, mapping: Mapping) -> TypeFormula:
    """Apply an injective renaming of type variables."""
    if len(set(mapping.values())) != len(mapping):
        raise ValueError("renaming must be injective")
    m = lambda vs: frozenset(mapping.get(v, v) for v in vs)
    gamma = phi.context
    new_gamma = replace(gamma, typevars=m(gamma.typevars),
                        decl={r: m(tvs) for r, tvs in gamma.decl.items()})
    return replace(phi, context=new_gamma, outvars=m(phi.outvars))


# -- bounded semantics ---------------------------------------------------------

def _disjoint_assignments(typevars: list, pool: list) -> Iterator[dict]:
    for owners in itertools.product(range(len(typevars) + 1), repeat=len(pool)):
        vt = {a: set() for a in typevars}
        for attr, owner in zip(pool, owners):
            if owner < len(typevars):
                vt[typevars[owner]].add(attr)
        yield {a: frozenset(s) for a, s in vt.items()}


def instantiations(gamma: TypeContext, universe: Iterable[str]) -> Iterator[Instantiation]:
    """Every instantiation whose type variables draw from ``universe``."""
    pool = sorted(set(universe) - gamma.specattrs)
    tvs = sorted(gamma.typevars, key=_tv_key)
    attrs = sorted(gamma.specattrs)
    choices = [bf.models(gamma.constraint[A], gamma.relvars) for A in attrs]
    for vt in _disjoint_assignments(tvs, pool):
        for combo in itertools.product(*choices):
            yield Instantiation(vt, dict(zip(attrs, combo)))


def instance_pairs(phi: TypeFormula, universe: Iterable[str]) -> set:
    """{(image, output type)} over all instantiations drawing from ``universe``.

    Images are tuples of types in sorted relation-variable order.  Type
    variables never receive special attributes, so an image is the disjoint
    union of a type-variable part and a special-attribute part; the two are
    enumerated separately and combined.
    """
    gamma = phi.context
    rs = sorted(gamma.relvars)
    pool = sorted(set(universe) - gamma.specattrs)
    tvs = sorted(gamma.typevars, key=_tv_key)
    base = set()
    for vt in _disjoint_assignments(tvs, pool):
        img = tuple(frozenset().union(*(vt[a] for a in gamma.decl[r])) for r in rs)
        out = frozenset().union(*(vt[a] for a in phi.outvars))
        base.add((img, out))
    attrs = sorted(gamma.specattrs)
    per_attr = []
    for A in attrs:
        opts = []
        for s in bf.models(gamma.constraint[A], gamma.relvars):
            opts.append((s, bf.evaluate(phi.outatt[A], s)))
        per_attr.append(opts)
    extra = set()
    for combo in itertools.product(*per_attr):
        img = tuple(frozenset(A for A, (s, _) in zip(attrs, combo) if r in s) for r in rs)
        out = frozenset(A for A, (_, o) in zip(attrs, combo) if o)
        extra.add((img, out))
    return {
        (tuple(b | x for b, x in zip(bimg, ximg)), bout | xout)
        for bimg, bout in base
        for ximg, xout in extra
    }


def fresh_attributes(n: int, avoid: Iterable[str]) -> list[str]:
    avoid = set(avoid)
    out, i = [], 0
    while len(out) < n:
        name = f"F{i}"
        if name not in avoid:
            out.append(name)
        i += 1
    return out


def formulas_equivalent_bounded(p1: TypeFormula, p2: TypeFormula, extra_attrs: int = 2) -> bool:
    """Compare the (image, output type) pairs of two formulas over a finite universe.

    The universe is both formulas' special attributes plus ``extra_attrs``
    fresh ones.  A formula's type variables may take any universe attribute
    that is not special for that formula.
    """
    if extra_attrs > 3:
        raise ValueError("extra_attrs above 3 is not enumerable here")
    if p1.context.relvars != p2.context.relvars:
        raise ValueError("formulas range over different relation variables")
    if p1.expr is not None and p2.expr is not None and p1.expr != p2.expr:
        raise ValueError("formulas are for different expressions")
    special = p1.context.specattrs | p2.context.specattrs
    universe = special | set(fresh_attributes(extra_attrs, special))
    return instance_pairs(p1, universe) == instance_pairs(p2, universe)


def _signature(phi: TypeFormula, a) -> tuple:
    return (tuple(sorted(r for r, tvs in phi.context.decl.items() if a in tvs)), a in phi.outvars)


def formulas_match_up_to_renaming(p1: TypeFormula, p2: TypeFormula) -> bool:
    """Same declarations and output variables after some bijective renaming of
    type variables, and equivalent constraints and output conditions."""
    g1, g2 = p1.context, p2.context
    if g1.relvars != g2.relvars or g1.specattrs != g2.specattrs:
        return False
    # type variables with the same membership pattern are interchangeable,
    # so a renaming exists iff the pattern multisets agree
    sig1 = sorted(_signature(p1, a) for a in g1.typevars)
    sig2 = sorted(_signature(p2, a) for a in g2.typevars)
    if sig1 != sig2:
        return False
    rs = g1.relvars
    return all(
        bf.equivalent(g1.constraint[A], g2.constraint[A], rs)
        and bf.equivalent(p1.outatt[A], p2.outatt[A], rs)
        for A in g1.specattrs
    )


# -- text format ---------------------------------------------------------------

def _tv_key(v):
    if isinstance(v, int):
        return (0, v, "")
    s = str(v)
    m = re.fullmatch(r"(.*?)(\d+)", s)
    if m:
        return (1, int(m.group(2)), m.group(1))
    return (1, -1, s)


def canonical_typevar_names(phi: TypeFormula) -> dict:
    """c1, c2, ... by first occurrence in the sorted declarations, then the outputs."""
    names: dict = {}
    gamma = phi.context
    for r in sorted(gamma.relvars):
        for a in sorted(gamma.decl[r], key=_tv_key):
            names.setdefault(a, f"c{len(names) + 1}")
    for a in sorted(phi.outvars, key=_tv_key):
        names.setdefault(a, f"c{len(names) + 1}")
    for a in sorted(gamma.typevars, key=_tv_key):
        names.setdefault(a, f"c{len(names) + 1}")
    return names


def canonicalize(phi: TypeFormula) -> TypeFormula:
    return rename_typevars(phi, canonical_typevar_names(phi))


def render_formula(phi: TypeFormula, simplify: bool = False) -> str:
    phi = canonicalize(phi)
    gamma = phi.context
    show = (lambda f: bf.render(bf.simplify(f))) if simplify else bf.render
    lines = []
    for r in sorted(gamma.relvars):
        lines.append(f"decl {r}: {' '.join(sorted(gamma.decl[r], key=_tv_key))}".rstrip())
    lines.append(f"out: {' '.join(sorted(phi.outvars, key=_tv_key))}".rstrip())
    for A in sorted(gamma.specattrs):
        lines.append(f"attr {A}: {show(gamma.constraint[A])} || {A}: {show(phi.outatt[A])}")
    return "\n".join(lines) + "\n"


class FormulaFormatError(ValueError):
    pass


def parse_formula(text: str, expr: Optional[Expr] = None) -> TypeFormula:
    decl: dict[str, frozenset] = {}
    outvars: Optional[frozenset] = None
    constraint: dict[str, bf.Formula] = {}
    outatt: dict[str, bf.Formula] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("decl "):
            name, sep, rest = line[5:].partition(":")
            if not sep or name.strip() in decl:
                raise FormulaFormatError(f"line {lineno}: bad or repeated decl: {raw!r}")
            decl[name.strip()] = frozenset(rest.split())
        elif line.startswith("out:"):
            if outvars is not None:
                raise FormulaFormatError(f"line {lineno}: second out line")
            outvars = frozenset(line[4:].split())
        elif line.startswith("attr "):
            m = re.fullmatch(r"attr\s+([A-Z]\w*)\s*:(.*)\|\|\s*([A-Z]\w*)\s*:(.*)", line)
            if not m or m.group(1) != m.group(3):
                raise FormulaFormatError(f"line {lineno}: expected 'attr A: f || A: g', got {raw!r}")
            A = m.group(1)
            if A in constraint:
                raise FormulaFormatError(f"line {lineno}: attribute {A} repeated")
            constraint[A] = bf.parse(m.group(2))
            outatt[A] = bf.parse(m.group(4))
        else:
            raise FormulaFormatError(f"line {lineno}: cannot read {raw!r}")
    if outvars is None:
        raise FormulaFormatError("missing out line")
    typevars = frozenset().union(*decl.values(), outvars)
    gamma = TypeContext(frozenset(decl), typevars, decl, frozenset(constraint), constraint)
    return TypeFormula(gamma, expr, outvars, outatt)
