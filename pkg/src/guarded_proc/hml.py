"""Hennessy-Milner logic with step-indexed satisfaction.

Modalities consume one level.  At level 0 the body of a modality sits under
the later modality and is vacuously true, so ``[a]phi`` always holds there and
``<a>phi`` just asks for an ``a``-transition.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce
from typing import Optional

from .approx import ProcTree
from .bisim import bisim_chain
from .glts import Glts, GltsError, action_set


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


@dataclass(frozen=True)
class TT:
    def __str__(self):
        return "tt"


@dataclass(frozen=True)
class FF:
    def __str__(self):
        return "ff"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return f"({self.left} & {self.right})"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return f"({self.left} | {self.right})"


@dataclass(frozen=True)
class Box:
    action: str
    body: "Formula"

    def __str__(self):
        return f"[{self.action}]{self.body}"


@dataclass(frozen=True)
class Dia:
    action: str
    body: "Formula"

    def __str__(self):
        return f"<{self.action}>{self.body}"


Formula = TT | FF | And | Or | Box | Dia


def conj(formulas) -> Formula:
    formulas = list(formulas)
    return reduce(And, formulas) if formulas else TT()


def disj(formulas) -> Formula:
    formulas = list(formulas)
    return reduce(Or, formulas) if formulas else FF()


def modal_depth(phi: Formula) -> int:
    match phi:
        case TT() | FF():
            return 0
        case And(l, r) | Or(l, r):
            return max(modal_depth(l), modal_depth(r))
        case Box(_, body) | Dia(_, body):
            return 1 + modal_depth(body)
    raise TypeError(phi)


def actions_of(phi: Formula) -> set:
    match phi:
        case TT() | FF():
            return set()
        case And(l, r) | Or(l, r):
            return actions_of(l) | actions_of(r)
        case Box(a, body) | Dia(a, body):
            return {a} | actions_of(body)
    raise TypeError(phi)


# ---------------------------------------------------------------------------
# satisfaction


def sat(g: Glts, x: str, phi: Formula, n: int) -> bool:
    if x not in g.states:
        raise GltsError(f"unknown state {x!r}")
    unknown = actions_of(phi) - set(g.actions)
    if unknown:
        raise GltsError(f"formula uses actions outside the alphabet: {sorted(unknown)}")
    if n < 0:
        raise ValueError("level must be non-negative")
    return _sat(g, x, phi, n, {})


def _sat(g: Glts, x: str, phi: Formula, n: int, memo: dict) -> bool:
    key = (x, phi, n)
    hit = memo.get(key)
    if hit is not None:
        return hit
    match phi:
        case TT():
            r = True
        case FF():
            r = False
        case And(l, rr):
            r = _sat(g, x, l, n, memo) and _sat(g, x, rr, n, memo)
        case Or(l, rr):
            r = _sat(g, x, l, n, memo) or _sat(g, x, rr, n, memo)
        case Box(a, body):
            r = n == 0 or all(_sat(g, y, body, n - 1, memo) for b, y in g.trans[x] if b == a)
        case Dia(a, body):
            r = any(b == a and (n == 0 or _sat(g, y, body, n - 1, memo)) for b, y in g.trans[x])
        case _:
            raise TypeError(phi)
    memo[key] = r
    return r


def sat_tree(t: ProcTree, phi: Formula) -> bool:
    """Satisfaction read directly off a process tree, at the tree's own budget."""
    match phi:
        case TT():
            return True
        case FF():
            return False
        case And(l, r):
            return sat_tree(t, l) and sat_tree(t, r)
        case Or(l, r):
            return sat_tree(t, l) or sat_tree(t, r)
        case Box(a, body):
            if t.budget == 0:
                return True
            return all(sat_tree(c, body) for b, c in t.body if b == a)
        case Dia(a, body):
            if t.budget == 0:
                return a in t.body
            return any(b == a and sat_tree(c, body) for b, c in t.body)
    raise TypeError(phi)


# ---------------------------------------------------------------------------
# distinguishing formulas


@dataclass(frozen=True)
class Distinction:
    """``formula`` holds of ``holds_at`` and fails at the other state, at ``level``."""

    formula: Formula
    holds_at: str
    fails_at: str
    level: int

    def __str__(self):
        return f"{self.formula}  (true at {self.holds_at}, false at {self.fails_at})"


def _preorders(g: Glts, n: int) -> list[frozenset]:
    """``le[k]``: pairs ``(x, y)`` where every level-k formula true at x is true at y.

    Level 0 compares action sets by inclusion.  Level k+1 asks that every
    transition of x be matched from y, and every transition of y be matched
    from x, with successors ordered at level k.
    """
    acts = {x: set(action_set(g, x)) for x in g.states}
    le = [frozenset((x, y) for x in g.states for y in g.states if acts[x] <= acts[y])]
    for _ in range(n):
        prev = le[-1]
        cur = set()
        for x in g.states:
            for y in g.states:
                fx, fy = g.trans[x], g.trans[y]
                forth = all(any(b == a and (x1, y1) in prev for b, y1 in fy) for a, x1 in fx)
                back = all(any(a == b and (x1, y1) in prev for a, x1 in fx) for b, y1 in fy)
                if forth and back:
                    cur.add((x, y))
        le.append(frozenset(cur))
    return le


def _separate(g: Glts, le: list, x: str, y: str, k: int) -> Formula:
    """A formula true at ``x`` and false at ``y`` at level ``k``; requires ``(x, y) not in le[k]``."""
    if k == 0:
        missing = sorted(set(action_set(g, x)) - set(action_set(g, y)))
        return Dia(missing[0], TT())
    prev = le[k - 1]
    fx, fy = g.trans[x], g.trans[y]
    for a, x1 in fx:
        answers = [y1 for b, y1 in fy if b == a]
        if not any((x1, y1) in prev for y1 in answers):
            return Dia(a, conj(_separate(g, le, x1, y1, k - 1) for y1 in answers))
    for b, y1 in fy:
        sources = [x1 for a, x1 in fx if a == b]
        if not any((x1, y1) in prev for x1 in sources):
            return Box(b, disj(_separate(g, le, x1, y1, k - 1) for x1 in sources))
    raise AssertionError("pair is ordered; nothing to separate")


def distinguish(g: Glts, x: str, y: str, n: int) -> Optional[Distinction]:
    """A level-n formula on which ``x`` and ``y`` disagree, or ``None``.

    Negation is not in the logic, so the result may hold at ``y`` instead of
    ``x``; :class:`Distinction` records which.  ``None`` is returned exactly
    when the two states satisfy the same level-n formulas.  That coincides
    with ``B_n`` at level 0 only: at higher levels the level-0 leaves cannot
    express the absence of an action, so some non-bisimilar pairs are
    logically indistinguishable.  ``indistinguishable_nonbisimilar`` lists
    those pairs.
    """
    for s in (x, y):
        if s not in g.states:
            raise GltsError(f"unknown state {s!r}")
    le = _preorders(g, n)
    if (x, y) not in le[n]:
        return Distinction(_separate(g, le, x, y, n), x, y, n)
    if (y, x) not in le[n]:
        return Distinction(_separate(g, le, y, x, n), y, x, n)
    return None


def indistinguishable_nonbisimilar(g: Glts, n: int) -> list[tuple[str, str]]:
    """Pairs that agree on every level-n formula yet are not related by ``B_n``."""
    le = _preorders(g, n)[n]
    b = bisim_chain(g, n)[n]
    return sorted((x, y) for x, y in le if (y, x) in le and (x, y) not in b)


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(?P<word>'?[A-Za-z_][A-Za-z0-9_]*)|(?P<sym>[\[\]<>()&|]))")


def _tokenize(src: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(src) and src[pos].isspace():
            pos += 1
        if pos >= len(src):
            break
        m = _TOKEN.match(src, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {src[pos]!r}", pos)
        start = m.start("word") if m.group("word") else m.start("sym")
        kind = "word" if m.group("word") else m.group("sym")
        tokens.append((kind, m.group("word") or m.group("sym"), start))
        pos = m.end()
    tokens.append(("eof", "", len(src)))
    return tokens


class _FormulaParser:
    def __init__(self, src: str):
        self.toks = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind: str, what: str):
        tok = self.peek()
        if tok[0] != kind:
            raise FormulaSyntaxError(f"expected {what}", tok[2])
        self.i += 1
        return tok

    def parse(self) -> Formula:
        phi = self.disjunction()
        tok = self.peek()
        if tok[0] != "eof":
            raise FormulaSyntaxError(f"unexpected {tok[1]!r}", tok[2])
        return phi

    def disjunction(self) -> Formula:
        phi = self.conjunction()
        while self.peek()[0] == "|":
            self.i += 1
            phi = Or(phi, self.conjunction())
        return phi

    def conjunction(self) -> Formula:
        phi = self.unary()
        while self.peek()[0] == "&":
            self.i += 1
            phi = And(phi, self.unary())
        return phi

    def unary(self) -> Formula:
        kind, text, pos = self.peek()
        if kind == "word" and text in ("tt", "ff"):
            self.i += 1
            return TT() if text == "tt" else FF()
        if kind == "(":
            self.i += 1
            phi = self.disjunction()
            self.take(")", "')'")
            return phi
        if kind in ("[", "<"):
            self.i += 1
            action = self.take("word", "an action name")[1]
            self.take("]" if kind == "[" else ">", "']'" if kind == "[" else "'>'")
            body = self.unary()
            return Box(action, body) if kind == "[" else Dia(action, body)
        raise FormulaSyntaxError("expected a formula", pos)


def parse_formula(src: str) -> Formula:
    """Parse ``tt``, ``ff``, ``&``, ``|``, ``[a]phi`` and ``<a>phi``.

    Modalities bind tightest, then ``&``, then ``|``; both connectives
    associate to the left.  Actions are identifiers, optionally primed
    (``'a`` for the CCS output on ``a``).
    """
    return _FormulaParser(src).parse()
