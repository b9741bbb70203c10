"""Compare inferred formulas against brute-force typing on random expressions.

For each expression, every type assignment over its special attributes plus a
few fresh ones is type-checked directly, and the resulting (assignment,
output type) pairs are compared with those generated by the inferred formula.
"""
import argparse
import random
import time
from dataclasses import dataclass

from polyra.corpus import principality_gap
from polyra.inference import infer_formula, typable
from polyra.ra_ast import (
    Attr, Comparison, Difference, Join, Predicate, Product, Project, ProjectOut,
    RelVarRef, Rename, Select, Union_, relvars, render_expr, specattrs,
)


@dataclass
class Config:
    samples: int = 200
    depth: int = 3
    fresh: int = 2
    max_cost: int = 6  # relvars x special attributes
    seed: int = 0


def random_expr(rng, depth):
    if depth == 0 or rng.random() < 0.3:
        return RelVarRef(rng.choice("rsu"))
    sub = lambda: random_expr(rng, depth - 1)
    k = rng.randrange(8)
    if k < 4:
        return (Union_, Difference, Join, Product)[k](sub(), sub())
    if k == 4:
        a, b = rng.sample("ABC", 2)
        return Select(Predicate((Comparison(Attr(a), "=", Attr(b)),)), sub())
    if k == 5:
        return Project(tuple(rng.sample("ABC", rng.randrange(3))), sub())
    if k == 6:
        a, b = rng.sample("ABC", 2)
        return Rename(a, b, sub())
    return ProjectOut(rng.choice("ABC"), sub())


def main(cfg: Config) -> int:
    rng = random.Random(cfg.seed)
    t0 = time.perf_counter()
    checked = skipped = failures = n_typable = 0
    while checked < cfg.samples:
        e = random_expr(rng, cfg.depth)
        if len(relvars(e)) * len(specattrs(e)) > cfg.max_cost:
            skipped += 1
            continue
        missing, spurious = principality_gap(e, infer_formula(e), cfg.fresh)
        checked += 1
        n_typable += typable(e)
        if missing or spurious:
            failures += 1
            print(f"MISMATCH {render_expr(e)}: {len(missing)} missing, {len(spurious)} spurious")
    print(f"checked {checked} ({n_typable} typable), skipped {skipped}, mismatches {failures}, "
          f"{time.perf_counter() - t0:.1f}s")
    return failures


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    for name, default in vars(Config()).items():
        p.add_argument("--" + name.replace("_", "-"), type=int, default=default)
    args = p.parse_args()
    raise SystemExit(1 if main(Config(**vars(args))) else 0)
