"""Depth-indexed approximants of the final guarded coalgebra.

A ``ProcTree`` of budget ``n`` is an element of the n-th stage of
``Proc = fix X. Pfin(A x later X)`` in the topos of trees:

* budget 0: a finite set of actions (the delayed part is the one-point set),
* budget k+1: a finite set of ``(action, tree of budget k)`` pairs.

So budget ``n`` exposes ``n + 1`` layers of transitions.  Trees are canonical,
so ``==`` on trees of equal budget is equality of processes at that stage.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Mapping

from .canon_set import FinSet, order_key, render
from .glts import Glts, GltsError


@dataclass(frozen=True, eq=False)
class ProcTree:
    budget: int
    body: FinSet

    def __post_init__(self):
        if self.budget < 0:
            raise ValueError("budget must be non-negative")
        for e in self.body:
            if self.budget == 0:
                if not isinstance(e, str):
                    raise ValueError(f"budget-0 tree holds actions, got {e!r}")
            elif not (
                isinstance(e, tuple)
                and len(e) == 2
                and isinstance(e[1], ProcTree)
                and e[1].budget == self.budget - 1
            ):
                raise ValueError(f"bad child {e!r} for a budget-{self.budget} tree")
        object.__setattr__(self, "_hash", hash((self.budget, self.body)))

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, ProcTree):
            return NotImplemented
        return self._hash == other._hash and self.budget == other.budget and self.body == other.body

    def __hash__(self):
        return self._hash

    def _order_key(self):
        return (self.budget, order_key(self.body))

    def actions(self) -> FinSet:
        if self.budget == 0:
            return self.body
        return FinSet(a for a, _ in self.body)

    def __str__(self):
        return render(self.body)

    def __repr__(self):
        return f"ProcTree({self.budget}, {self})"


def leaf(actions) -> ProcTree:
    return ProcTree(0, FinSet(actions))


def node(children) -> ProcTree:
    """Tree of budget k+1 from ``(action, budget-k tree)`` pairs; needs at least one child."""
    children = FinSet(children)
    if not children:
        raise ValueError("node() cannot infer the budget of an empty tree; use deadlock(n)")
    return ProcTree(children.elems[0][1].budget + 1, children)


def deadlock(n: int) -> ProcTree:
    return ProcTree(n, FinSet())


def _step(g: Glts, prev: Mapping[str, ProcTree] | None, budget: int, intern: dict) -> dict:
    level = {}
    for x in g.states:
        if prev is None:
            body = FinSet(a for a, _ in g.trans[x])
        else:
            body = FinSet((a, prev[y]) for a, y in g.trans[x])
        t = ProcTree(budget, body)
        level[x] = intern.setdefault(t, t)
    return level


def eval_levels(g: Glts, n: int) -> list[dict]:
    """``[eval(., 0), ..., eval(., n)]`` as state-indexed dictionaries."""
    if n < 0:
        raise ValueError("budget must be non-negative")
    intern: dict = {}
    levels = [_step(g, None, 0, intern)]
    for k in range(1, n + 1):
        levels.append(_step(g, levels[-1], k, intern))
    return levels


def eval_all(g: Glts, n: int) -> dict:
    return eval_levels(g, n)[-1]


def eval_state(g: Glts, x: str, n: int) -> ProcTree:
    """The process of ``x`` at budget ``n``.

    Follows the recurrence ``eval(x, 0) = {a | x -a-> _}`` and
    ``eval(x, k+1) = {(a, eval(y, k)) | x -a-> y}``.
    """
    if x not in g.states:
        raise GltsError(f"unknown state {x!r}")
    return eval_all(g, n)[x]


@lru_cache(maxsize=1 << 16)
def restrict(t: ProcTree) -> ProcTree:
    """Drop the deepest layer: the stage-n to stage-(n-1) restriction map."""
    if t.budget == 0:
        raise ValueError("cannot restrict a budget-0 tree")
    if t.budget == 1:
        return ProcTree(0, FinSet(a for a, _ in t.body))
    return ProcTree(t.budget - 1, FinSet((a, restrict(c)) for a, c in t.body))


def check_unique(g: Glts, h: Mapping[str, ProcTree], n: int) -> bool:
    """Does the family ``h`` (all trees of budget ``n``) satisfy the coalgebra recurrence?

    At budget 0 that means ``h(x)`` is the action set of ``x``; above it,
    ``h(x) == {(a, restrict(h(y))) | x -a-> y}``.  The only family passing
    this check is ``eval(., n)``.
    """
    for x in g.states:
        t = h.get(x)
        if not isinstance(t, ProcTree) or t.budget != n:
            return False
    for x in g.states:
        if n == 0:
            expected = FinSet(a for a, _ in g.trans[x])
        else:
            expected = FinSet((a, restrict(h[y])) for a, y in g.trans[x])
        if h[x].body != expected:
            return False
    return True


def leaf_perturbations(t: ProcTree, alphabet) -> Iterator[ProcTree]:
    """Every tree obtained by toggling one action in one budget-0 node of ``t``."""
    if t.budget == 0:
        for a in alphabet:
            if a in t.body:
                yield ProcTree(0, FinSet(b for b in t.body if b != a))
            else:
                yield ProcTree(0, FinSet(t.body.elems + (a,)))
        return
    for a, child in t.body:
        rest = [e for e in t.body if e != (a, child)]
        for changed in leaf_perturbations(child, alphabet):
            yield ProcTree(t.budget, FinSet(rest + [(a, changed)]))


def subtrees(roots) -> list[ProcTree]:
    """All distinct trees reachable from ``roots`` (roots included), in canonical order."""
    seen = set()
    todo = list(roots)
    while todo:
        t = todo.pop()
        if t in seen:
            continue
        seen.add(t)
        if t.budget > 0:
            todo.extend(c for _, c in t.body)
    return sorted(seen, key=order_key)


SINK = "*"


def tree_system(roots) -> tuple[Glts, dict]:
    """The unfold system on trees: a tree steps to its children.

    Budget-0 trees step into a deadlocked sink, which stands for the
    one-point set of stage 0.  Returns the system and the tree-to-state map.
    """
    trees = subtrees(roots)
    ids = {t: f"t{i}" for i, t in enumerate(trees)}
    triples, actions = [], set()
    for t, x in ids.items():
        for e in t.body:
            if t.budget == 0:
                triples.append((x, e, SINK))
                actions.add(e)
            else:
                triples.append((x, e[0], ids[e[1]]))
                actions.add(e[0])
    names = {x: str(t) for t, x in ids.items()}
    g = Glts.build(list(ids.values()) + [SINK], actions, triples, names)
    return g, ids
