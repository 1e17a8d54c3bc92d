"""Guarded labelled transition systems over finite state spaces.

A transition ``(a, y)`` in ``trans[x]`` reads "x does a, and continues as y
one step later".  The delay is not represented: the successor is a plain
state, and consumers interpret it at the next lower level.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from . import functor_kit as fk
from .canon_set import FinSet, empty, union


class GltsError(ValueError):
    """Malformed system or unknown state/action."""


@dataclass(frozen=True)
class Transition:
    source: str
    label: str
    target: str

    def __str__(self):
        return f"{self.source} --{self.label}--> {self.target}"


@dataclass(frozen=True, eq=False)
class Glts:
    states: FinSet
    actions: FinSet
    trans: Mapping[str, FinSet]
    # display names, e.g. the CCS term a state was compiled from
    names: Mapping[str, str] = field(default_factory=dict)

    @classmethod
    def build(
        cls,
        states: Iterable[str],
        actions: Iterable[str],
        transitions: Iterable[tuple[str, str, str]],
        names: Optional[Mapping[str, str]] = None,
    ) -> "Glts":
        """Assemble and validate a system from ``(source, label, target)`` triples."""
        states = FinSet(states)
        buckets: dict = {x: [] for x in states}
        for src, label, dst in transitions:
            buckets.setdefault(src, []).append((label, dst))
        g = cls(
            states,
            FinSet(actions),
            {x: FinSet(ts) for x, ts in buckets.items()},
            dict(names or {}),
        )
        problems = validate(g)
        if problems:
            raise GltsError("; ".join(problems))
        return g

    def __eq__(self, other):
        if not isinstance(other, Glts):
            return NotImplemented
        return (
            self.states == other.states
            and self.actions == other.actions
            and {x: self.trans.get(x, empty()) for x in self.states}
            == {x: other.trans.get(x, empty()) for x in other.states}
        )

    __hash__ = None

    def out(self, x: str) -> FinSet:
        """``trans[x]`` with an unknown-state check."""
        if x not in self.states:
            raise GltsError(f"unknown state {x!r}")
        return self.trans[x]

    def transitions(self) -> list[Transition]:
        return [Transition(x, a, y) for x in self.states for a, y in self.trans[x]]

    def display(self, x: str) -> str:
        return self.names.get(x, x)


def validate(g: Glts) -> list[str]:
    """Every invariant violation as a message; an empty list means the system is well formed."""
    problems = []
    for x in g.trans:
        if x not in g.states:
            problems.append(f"transitions given for undeclared state {x!r}")
    for x in g.states:
        if x not in g.trans:
            problems.append(f"state {x!r} has no transition entry")
            continue
        for t in g.trans[x]:
            if not (isinstance(t, tuple) and len(t) == 2):
                problems.append(f"malformed transition {t!r} from {x!r}")
                continue
            a, y = t
            if a not in g.actions:
                problems.append(f"transition ({x}, {a}, {y}) uses unknown action {a!r}")
            if y not in g.states:
                problems.append(f"transition ({x}, {a}, {y}) targets unknown state {y!r}")
    return problems


def successors(g: Glts, x: str, a: str) -> FinSet:
    return FinSet(y for b, y in g.out(x) if b == a)


def action_set(g: Glts, x: str) -> FinSet:
    return FinSet(a for a, _ in g.out(x))


def reachable(g: Glts, x: str) -> FinSet:
    seen = {x}
    todo = [x]
    g.out(x)
    while todo:
        s = todo.pop()
        for _, y in g.trans[s]:
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return FinSet(seen)


def restrict_to(g: Glts, roots: Iterable[str]) -> Glts:
    """Sub-system on the states reachable from ``roots``."""
    keep = empty()
    for r in roots:
        keep = union(keep, reachable(g, r))
    return Glts(keep, g.actions, {x: g.trans[x] for x in keep}, dict(g.names))


def as_coalgebra(g: Glts):
    """The system as a coalgebra for ``Pfin(Const(actions) x Id)``.

    Returns ``(functor, carrier, structure)`` where ``structure`` maps each
    state to its transition set, an FValue of the functor.
    """
    F = fk.glts_functor(g.actions)
    return F, g.states, (lambda x: g.out(x))


# ---------------------------------------------------------------------------
# text and JSON formats


def parse_glts(text: str) -> Glts:
    """Read the line-based format.

    Each non-blank line is ``state ID``, ``action ID`` or ``trans SRC LABEL DST``;
    ``#`` starts a comment.  Declarations may come in any order.
    """
    states, actions, triples = [], [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        match words:
            case ["state", x]:
                states.append(x)
            case ["action", a]:
                actions.append(a)
            case ["trans", src, a, dst]:
                triples.append((src, a, dst, lineno))
            case _:
                raise GltsError(f"line {lineno}: cannot parse {raw.strip()!r}")
    known_s, known_a = set(states), set(actions)
    for src, a, dst, lineno in triples:
        for what, ident, known in (("state", src, known_s), ("action", a, known_a), ("state", dst, known_s)):
            if ident not in known:
                raise GltsError(f"line {lineno}: unknown {what} {ident!r} in 'trans {src} {a} {dst}'")
    return Glts.build(states, actions, [(s, a, d) for s, a, d, _ in triples])


def format_glts(g: Glts) -> str:
    lines = []
    for x in g.states:
        comment = f"  # {g.names[x]}" if x in g.names else ""
        lines.append(f"state {x}{comment}")
    lines += [f"action {a}" for a in g.actions]
    lines += [f"trans {t.source} {t.label} {t.target}" for t in g.transitions()]
    return "\n".join(lines) + "\n"


def to_json(g: Glts) -> dict:
    return {
        "states": list(g.states),
        "actions": list(g.actions),
        "trans": [[t.source, t.label, t.target] for t in g.transitions()],
        "names": {x: g.names[x] for x in g.states if x in g.names},
    }


def from_json(data: dict | str) -> Glts:
    if isinstance(data, str):
        data = json.loads(data)
    return Glts.build(
        data["states"], data["actions"], [tuple(t) for t in data["trans"]], data.get("names")
    )
