"""Search random systems for pairs that no formula separates at level n
although they are not level-n bisimilar, and print the smallest one found.

Formulas only see actions that are present at the last level, never absent
ones, so the logical equivalence at level n can be coarser than B_n.
"""

import argparse
import random
from dataclasses import dataclass

from guarded_proc.approx import eval_state
from guarded_proc.bisim import mismatch
from guarded_proc.glts import format_glts, restrict_to
from guarded_proc.hml import indistinguishable_nonbisimilar
from guarded_proc.random_systems import SystemShape, random_glts


@dataclass
class Config:
    systems: int = 5000
    states: int = 6
    actions: int = 2
    out_degree: int = 3
    depth: int = 3
    seed: int = 0


def search(cfg: Config):
    rng = random.Random(cfg.seed)
    shape = SystemShape(cfg.states, cfg.actions, cfg.out_degree)
    hits, best = 0, None
    for _ in range(cfg.systems):
        g = random_glts(rng, shape)
        for n in range(cfg.depth + 1):
            pairs = indistinguishable_nonbisimilar(g, n)
            if not pairs:
                continue
            hits += 1
            x, y = pairs[0]
            small = restrict_to(g, [x, y])
            if best is None or len(small.states) < len(best[0].states):
                best = (small, x, y, n)
            break
    return hits, best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, default in vars(Config()).items():
        ap.add_argument(f"--{name.replace('_', '-')}", type=int, default=default)
    cfg = Config(**vars(ap.parse_args()))
    hits, best = search(cfg)
    print(f"{hits} of {cfg.systems} systems contain such a pair")
    if best is None:
        return
    g, x, y, n = best
    print(f"\nsmallest: {x} vs {y} at level {n}")
    print(format_glts(g))
    print(f"{x}: {eval_state(g, x, n)}")
    print(f"{y}: {eval_state(g, y, n)}")
    print(f"B_{n} fails because {mismatch(g, x, y, n)}")


if __name__ == "__main__":
    main()
