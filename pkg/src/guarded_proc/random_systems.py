"""Seeded random instances for property checks and experiment scripts."""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import ccs
from .canon_set import FinSet
from .functor_kit import Relation
from .glts import Glts

ACTIONS = ("a", "b", "c", "d")


@dataclass(frozen=True)
class SystemShape:
    max_states: int = 6
    max_actions: int = 3
    max_out: int = 3
    min_states: int = 1


def random_glts(rng: random.Random, shape: SystemShape = SystemShape()) -> Glts:
    n = rng.randint(shape.min_states, shape.max_states)
    k = rng.randint(1, shape.max_actions)
    states = [f"x{i}" for i in range(n)]
    actions = ACTIONS[:k]
    triples = [
        (x, rng.choice(actions), rng.choice(states))
        for x in states
        for _ in range(rng.randint(0, shape.max_out))
    ]
    return Glts.build(states, actions, triples)


def random_relation(rng: random.Random, domain, codomain, density: float = 0.5) -> Relation:
    return Relation.from_predicate(domain, codomain, lambda x, y: rng.random() < density)


def random_subset(rng: random.Random, items, max_size: int) -> FinSet:
    items = list(items)
    size = rng.randint(0, min(max_size, len(items)))
    return FinSet(rng.sample(items, size))


def random_process(rng: random.Random, depth: int, scope: int, rec: int = 0, guarded: bool = True):
    """A random well-scoped term; with ``guarded`` every variable sits under a prefix."""
    choices = ["nil", "prefix"]
    if depth > 0:
        choices += ["sum", "par", "nu", "mu"]
    if rec and not guarded:
        choices.append("var")
    match rng.choice(choices):
        case "nil":
            return ccs.NIL
        case "prefix":
            label = _random_label(rng, scope)
            if rec and (depth == 0 or rng.random() < 0.3):
                return ccs.Prefix(label, ccs.Var(rng.randrange(rec)))
            if depth == 0:
                return ccs.Prefix(label, ccs.NIL)
            return ccs.Prefix(label, random_process(rng, depth - 1, scope, rec, False))
        case "sum":
            return ccs.Sum(
                random_process(rng, depth - 1, scope, rec, guarded),
                random_process(rng, depth - 1, scope, rec, guarded),
            )
        case "par":
            return ccs.Par(
                random_process(rng, depth - 1, scope, rec, guarded),
                random_process(rng, depth - 1, scope, rec, guarded),
            )
        case "nu":
            return ccs.Nu(random_process(rng, depth - 1, scope + 1, rec, guarded))
        case "mu":
            return ccs.Mu(random_process(rng, depth - 1, scope, rec + 1, True))
        case "var":
            return ccs.Var(rng.randrange(rec))


def _random_label(rng: random.Random, scope: int) -> ccs.Label:
    if scope == 0 or rng.random() < 0.15:
        return ccs.TAU
    return ccs.Label(rng.choice(("in", "out")), rng.randrange(scope))
