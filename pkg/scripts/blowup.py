"""Type-variable growth of inferred formulas for right-nested join chains.

Every nonempty region of the Venn diagram of m relation types needs its own
type variable, so the count should be 2^m - 1.
"""
import argparse
import time
from dataclasses import dataclass

from polyra.corpus import join_chain
from polyra.inference import infer_formula, typevar_count


@dataclass
class Config:
    max_m: int = 7


def main(cfg: Config) -> None:
    print(f"{'m':>3} {'typevars':>9} {'2^m-1':>7} {'seconds':>9}")
    for m in range(1, cfg.max_m + 1):
        t0 = time.perf_counter()
        n = typevar_count(infer_formula(join_chain(m)))
        print(f"{m:>3} {n:>9} {2 ** m - 1:>7} {time.perf_counter() - t0:>9.3f}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--max-m", type=int, default=Config.max_m)
    main(Config(max_m=p.parse_args().max_m))
