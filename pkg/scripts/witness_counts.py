"""Tabulate how many lifting witnesses a related pair has under Pfin(Id).

The lifted relation carries data: for the total relation the count grows
quickly with the set sizes, while for the identity it is always one.
"""

import argparse
import itertools

from guarded_proc.canon_set import FinSet
from guarded_proc.functor_kit import Id, Pfin, Relation, witness_count


def table(max_size: int):
    rows = []
    for n, m in itertools.product(range(max_size + 1), repeat=2):
        dom, cod = [f"x{i}" for i in range(n)], [f"y{j}" for j in range(m)]
        u, v = FinSet(dom), FinSet(cod)
        total = witness_count(Pfin(Id()), Relation.total(dom, cod), u, v)
        rows.append((n, m, total))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-size", type=int, default=3)
    args = ap.parse_args()
    print(" |u| |v|  witnesses (total R)")
    for n, m, total in table(args.max_size):
        print(f"{n:4d}{m:4d}  {total:10d}")
    xy = FinSet(["x", "y"])
    same = witness_count(Pfin(Id()), Relation.identity(xy), xy, xy)
    print(f"identity on {{x, y}}: {same} witness")


if __name__ == "__main__":
    main()
