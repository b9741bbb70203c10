"""Cost of the bounded equivalence search as the budgets grow."""
import argparse
import time
from dataclasses import dataclass

from polyra.equivalence import poly_equiv_bounded
from polyra.ra_ast import parse_expr

PAIRS = {
    "select/times": ("select[A=B]((r times project[A,B,C](s)))", "(r times select[A=B](project[A,B,C](s)))"),
    "project/join": ("project[A]((r join project[A,B](s)))", "project[A]((r join s))"),
}


@dataclass
class Config:
    max_attrs: int = 4
    values: int = 2
    rows: int = 2


def main(cfg: Config) -> None:
    for name, (a, b) in PAIRS.items():
        for attrs in range(cfg.max_attrs + 1):
            t0 = time.perf_counter()
            res = poly_equiv_bounded(parse_expr(a), parse_expr(b), attrs, cfg.values, cfg.rows)
            verdict = type(res).__name__
            if verdict == "Counterexample":
                verdict += " (database)" if res.database is not None else " (domain)"
            print(f"{name:13} attrs={attrs} values={cfg.values} rows={cfg.rows}: "
                  f"{verdict} {time.perf_counter() - t0:.2f}s")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    for name, default in vars(Config()).items():
        p.add_argument("--" + name.replace("_", "-"), type=int, default=default)
    main(Config(**vars(p.parse_args())))
