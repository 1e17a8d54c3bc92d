"""Level-indexed guarded bisimilarity and its cross-checks.

``B_0(x, y)`` holds when ``x`` and ``y`` offer the same actions: the delayed
clause is vacuous at stage 0.  ``B_{k+1}(x, y)`` is the back-and-forth
condition whose continuations are related by ``B_k``.  On a finite system the
chain ``B_0 >= B_1 >= ...`` stabilises, and the limit is classical
bisimilarity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from . import functor_kit as fk
from .approx import eval_all, tree_system
from .canon_set import FinSet
from .functor_kit import Relation
from .glts import Glts, action_set


@dataclass(frozen=True)
class LevelRelation:
    level: int
    rel: Relation

    def __call__(self, x, y) -> bool:
        return self.rel(x, y)


def _pairs(g: Glts):
    return itertools.product(g.states, g.states)


def back_and_forth(g: Glts, x: str, y: str, prev) -> bool:
    """Transfer condition for ``(x, y)`` with continuations judged by ``prev(x', y')``."""
    fx, fy = g.out(x), g.out(y)
    for a, x1 in fx:
        if not any(b == a and prev(x1, y1) for b, y1 in fy):
            return False
    for b, y1 in fy:
        if not any(a == b and prev(x1, y1) for a, x1 in fx):
            return False
    return True


def _level0(g: Glts) -> frozenset:
    acts = {x: action_set(g, x) for x in g.states}
    return frozenset((x, y) for x, y in _pairs(g) if acts[x] == acts[y])


def _next(g: Glts, prev: frozenset) -> frozenset:
    test = prev.__contains__
    rel = lambda a, b: test((a, b))
    return frozenset((x, y) for x, y in _pairs(g) if back_and_forth(g, x, y, rel))


def _as_relation(g: Glts, pairs) -> Relation:
    return Relation(g.states, g.states, FinSet(pairs))


def bisim_chain(g: Glts, n: int) -> list[frozenset]:
    """Pair sets of ``B_0 .. B_n``."""
    chain = [_level0(g)]
    for _ in range(n):
        chain.append(_next(g, chain[-1]))
    return chain


def bisim_level(g: Glts, n: int) -> LevelRelation:
    if n < 0:
        raise ValueError("level must be non-negative")
    return LevelRelation(n, _as_relation(g, bisim_chain(g, n)[-1]))


def bisim_stable(g: Glts) -> tuple[Relation, int]:
    """The limit of the chain and the first level ``k`` with ``B_{k+1} == B_k``."""
    bound = len(g.states) ** 2 + 1
    current = _level0(g)
    for k in range(bound + 1):
        nxt = _next(g, current)
        if nxt == current:
            return _as_relation(g, current), k
        current = nxt
    raise AssertionError(f"no stabilisation within {bound} iterations")


def check_is_bisimulation(g: Glts, R) -> bool:
    """Is ``R`` closed under the back-and-forth condition with continuations in ``R``?"""
    return all(back_and_forth(g, x, y, R) for x, y in R.pairs)


@dataclass(frozen=True)
class Coincidence:
    ok: bool
    level: int
    counterexample: Optional[tuple[str, str]] = None
    bisimilar: Optional[bool] = None
    equal_trees: Optional[bool] = None

    def __bool__(self):
        return self.ok


def coincidence(g: Glts, n: int) -> Coincidence:
    """Compare ``B_n(x, y)`` with ``eval(x, n) == eval(y, n)`` on every pair.

    On failure the lexicographically least offending pair is reported.
    """
    b = bisim_chain(g, n)[-1]
    trees = eval_all(g, n)
    for x, y in _pairs(g):
        lhs = (x, y) in b
        rhs = trees[x] == trees[y]
        if lhs != rhs:
            return Coincidence(False, n, (x, y), lhs, rhs)
    return Coincidence(True, n)


def coalgebraic_bisim_check(g: Glts, R: Relation, prev: Relation) -> bool:
    """Every pair of ``R`` has a lifting witness between the two transition sets.

    Delayed positions are judged by ``prev``, the relation one level down.
    """
    F = fk.glts_functor(g.actions)
    return all(fk.rel_lift_witness(F, prev, g.out(x), g.out(y)) is not None for x, y in R.pairs)


def bisim_level_coalgebraic(g: Glts, n: int) -> Relation:
    """``B_n`` computed only through relation lifting.

    Level 0 lifts the total relation (anything is related later at stage 0).
    """
    F = fk.glts_functor(g.actions)
    prev = Relation.total(g.states, g.states)
    for _ in range(n + 1):
        prev = Relation.from_predicate(
            g.states,
            g.states,
            lambda x, y, p=prev: fk.rel_lift_witness(F, p, g.out(x), g.out(y)) is not None,
        )
    return prev


def final_coalgebra_coincidence(g: Glts, n: int) -> bool:
    """On the image of ``eval(., n)``, level-n bisimilarity of trees is tree equality."""
    trees = set(eval_all(g, n).values())
    tg, ids = tree_system(trees)
    b = bisim_chain(tg, n)[-1]
    return all(((ids[s], ids[t]) in b) == (s == t) for s in trees for t in trees)


@dataclass(frozen=True)
class Mismatch:
    """A transition of one side that the other side cannot answer at the level below."""

    side: str  # "left" or "right"
    source: str
    action: str
    target: str
    level: int

    def __str__(self):
        other = "right" if self.side == "left" else "left"
        if self.level == 0:
            return f"{self.source} --{self.action}--> is not offered by the {other} state"
        return (
            f"{self.source} --{self.action}--> {self.target} has no {self.action}-successor "
            f"on the {other} side related at level {self.level - 1}"
        )


def mismatch(g: Glts, x: str, y: str, n: int) -> Optional[Mismatch]:
    """First unanswerable transition witnessing ``not B_n(x, y)``, else ``None``."""
    chain = bisim_chain(g, n)
    if (x, y) in chain[n]:
        return None
    if n == 0:
        ay = action_set(g, y)
        for a, x1 in g.out(x):
            if a not in ay:
                return Mismatch("left", x, a, x1, 0)
        ax = action_set(g, x)
        for a, y1 in g.out(y):
            if a not in ax:
                return Mismatch("right", y, a, y1, 0)
        raise AssertionError("level-0 failure without an action difference")
    prev = chain[n - 1]
    for a, x1 in g.out(x):
        if not any(b == a and (x1, y1) in prev for b, y1 in g.out(y)):
            return Mismatch("left", x, a, x1, n)
    for a, y1 in g.out(y):
        if not any(b == a and (x1, y1) in prev for b, x1 in g.out(x)):
            return Mismatch("right", y, a, y1, n)
    raise AssertionError("failure without an unanswerable transition")
