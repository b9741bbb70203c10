"""Systems of set equations over proper substitutions, and their symbolic solutions.

A system has two disjoint pools of variables, L and R.  Each equation equates a
union of L-variables with a union of R-variables.  A solution assigns pairwise
disjoint sets to the variables of each pool.  ``solve`` returns a finite
representation of all solutions: fresh variables (themselves standing for
pairwise disjoint sets) and, for every pool variable, the set of fresh
variables whose union it equals.

Fresh variables are ``Bar(x)`` (the part of ``x`` outside every variable of
the other pool) and ``Pair(a, b)`` (the overlap of ``a`` in L with ``b`` in R).
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Union

EqVar = Hashable


@dataclass(frozen=True)
class Bar:
    var: EqVar

    def __str__(self):
        return f"~{self.var}"


@dataclass(frozen=True)
class Pair:
    left: EqVar
    right: EqVar

    def __str__(self):
        return f"({self.left},{self.right})"


SolutionVar = Union[Bar, Pair]


@dataclass(frozen=True)
class EquationSystem:
    left_pool: frozenset
    right_pool: frozenset
    equations: tuple[tuple[frozenset, frozenset], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "left_pool", frozenset(self.left_pool))
        object.__setattr__(self, "right_pool", frozenset(self.right_pool))
        eqs = tuple((frozenset(l), frozenset(r)) for l, r in self.equations)
        object.__setattr__(self, "equations", eqs)
        if self.left_pool & self.right_pool:
            raise ValueError(f"pools overlap on {sorted(map(str, self.left_pool & self.right_pool))}")
        for lhs, rhs in eqs:
            if not lhs <= self.left_pool:
                raise ValueError(f"left-hand side {sorted(map(str, lhs))} not within L")
            if not rhs <= self.right_pool:
                raise ValueError(f"right-hand side {sorted(map(str, rhs))} not within R")


@dataclass(frozen=True)
class SymbolicSolution:
    fresh_vars: frozenset
    assignment: Mapping[EqVar, frozenset] = field(hash=False)


def _initial(sys: EquationSystem) -> dict:
    g = {}
    for a in sys.left_pool:
        g[a] = frozenset([Bar(a)] + [Pair(a, b) for b in sys.right_pool])
    for b in sys.right_pool:
        g[b] = frozenset([Bar(b)] + [Pair(a, b) for a in sys.left_pool])
    return g


def solve(sys: EquationSystem, forced_empty_pairs: Iterable[tuple] = ()) -> SymbolicSolution:
    """Symbolic solution of ``sys``.

    ``forced_empty_pairs`` lists pairs (a, b) from L x R whose overlap is
    discarded up front, which makes the images of ``a`` and ``b`` disjoint.
    """
    forced = set(forced_empty_pairs)
    for a, b in forced:
        if a not in sys.left_pool or b not in sys.right_pool:
            raise ValueError(f"forced pair ({a}, {b}) is not in L x R")
    g = _initial(sys)
    dropped = {Pair(a, b) for a, b in forced}
    for lhs, rhs in sys.equations:
        left = frozenset().union(*(g[x] for x in lhs))
        right = frozenset().union(*(g[x] for x in rhs))
        dropped |= left ^ right
    g2 = {x: img - dropped for x, img in g.items()}
    fresh = frozenset().union(*g2.values()) if g2 else frozenset()
    return SymbolicSolution(fresh, g2)


def apply_solution(sol: SymbolicSolution, vars: Iterable[EqVar]) -> frozenset:
    out = set()
    for x in vars:
        if x not in sol.assignment:
            raise KeyError(f"unknown variable {x!r}")
        out |= sol.assignment[x]
    return frozenset(out)


# -- brute-force check over a small universe ---------------------------------

def proper_substitutions(vars: Iterable, universe_size: int):
    """Every proper substitution of ``vars`` into subsets of ``range(universe_size)``.

    Each element goes to at most one variable.  Yields dicts.
    """
    vs = list(vars)
    for owners in itertools.product(range(len(vs) + 1), repeat=universe_size):
        sub = {v: set() for v in vs}
        for elem, owner in enumerate(owners):
            if owner < len(vs):
                sub[vs[owner]].add(elem)
        yield {v: frozenset(s) for v, s in sub.items()}


def _is_solution(sys: EquationSystem, fl: Mapping, fr: Mapping) -> bool:
    for lhs, rhs in sys.equations:
        if frozenset().union(*(fl[a] for a in lhs)) != frozenset().union(*(fr[b] for b in rhs)):
            return False
    return True


def _pairwise_disjoint(sets) -> bool:
    seen: set = set()
    for s in sets:
        if seen & s:
            return False
        seen |= s
    return True


def verify_solution(sys: EquationSystem, sol: SymbolicSolution, universe_size: int = 2) -> bool:
    """Exhaustively check that ``sol`` describes exactly the solutions of ``sys``
    over a universe of ``universe_size`` elements."""
    if universe_size > 4:
        raise ValueError("universe_size above 4 is not enumerable here")
    lpool, rpool = sorted(sys.left_pool, key=str), sorted(sys.right_pool, key=str)
    fresh = sorted(sol.fresh_vars, key=str)
    realized = set()
    for h in proper_substitutions(fresh, universe_size):
        fl = {a: frozenset().union(*(h[c] for c in sol.assignment[a])) for a in lpool}
        fr = {b: frozenset().union(*(h[c] for c in sol.assignment[b])) for b in rpool}
        if not (_pairwise_disjoint(fl.values()) and _pairwise_disjoint(fr.values())):
            return False
        if not _is_solution(sys, fl, fr):
            return False
        realized.add((tuple(fl[a] for a in lpool), tuple(fr[b] for b in rpool)))
    for fl in proper_substitutions(lpool, universe_size):
        for fr in proper_substitutions(rpool, universe_size):
            if _is_solution(sys, fl, fr):
                key = (tuple(fl[a] for a in lpool), tuple(fr[b] for b in rpool))
                if key not in realized:
                    return False
    return True


# -- text formats ------------------------------------------------------------

def parse_system(text: str) -> EquationSystem:
    """Read ``L: a1 a2; R: b1 b2; a1 = b1; a2 = b1 b2`` (``;`` or newlines)."""
    left = right = None
    eqs = []
    for part in re.split(r"[;\n]", text):
        part = part.split("#", 1)[0].strip()
        if not part:
            continue
        head, colon, rest = part.partition(":")
        if colon and head.strip() in ("L", "R"):
            names = rest.split()
            if len(set(names)) != len(names):
                raise ValueError(f"duplicate variable in pool {head.strip()}")
            if head.strip() == "L":
                left = frozenset(names)
            else:
                right = frozenset(names)
            continue
        lhs, eq, rhs = part.partition("=")
        if not eq:
            raise ValueError(f"cannot read {part!r}: expected a pool line or an equation")
        eqs.append((frozenset(lhs.split()), frozenset(rhs.split())))
    if left is None or right is None:
        raise ValueError("system must declare both 'L:' and 'R:' pools")
    return EquationSystem(left, right, tuple(eqs))


def canonical_names(sys: EquationSystem, sol: SymbolicSolution) -> dict:
    """c1, c2, ... in order of first occurrence, visiting L then R (each sorted).

    Within an L-variable's image ``Bar`` precedes its pairs; within an
    R-variable's image the pairs precede ``Bar``.
    """
    lpool, rpool = sorted(sys.left_pool, key=str), sorted(sys.right_pool, key=str)
    names: dict = {}
    for x in lpool + rpool:
        for c in _ordered_image(sys, sol, x, lpool, rpool):
            names.setdefault(c, f"c{len(names) + 1}")
    return names


def _ordered_image(sys, sol, x, lpool, rpool) -> list:
    img = sol.assignment[x]
    if x in sys.left_pool:
        order = [Bar(x)] + [Pair(x, b) for b in rpool]
    else:
        order = [Pair(a, x) for a in lpool] + [Bar(x)]
    return [c for c in order if c in img]


def render_solution(sys: EquationSystem, sol: SymbolicSolution) -> str:
    names = canonical_names(sys, sol)
    lpool, rpool = sorted(sys.left_pool, key=str), sorted(sys.right_pool, key=str)
    lines = [("V: " + " ".join(sorted(names.values(), key=lambda n: int(n[1:])))).rstrip()]
    for x in lpool + rpool:
        img = " ".join(names[c] for c in _ordered_image(sys, sol, x, lpool, rpool))
        lines.append(f"{x} = {img}".rstrip())
    return "\n".join(lines).rstrip() + "\n"
