"""CCS with guarded recursion: syntax, transitions, and compilation to a GLTS.

Channel names are numbers.  A term at scope ``n`` may use names ``0 .. n-1``;
``Nu`` binds the next name, so its body lives at scope ``n + 1`` and refers to
the restricted channel as ``n``.  Free channels of a program are numbered in
alphabetical order.

Recursion variables are ordinary De Bruijn indices (``Var(0)`` is the nearest
``Mu``).  Every bound variable must occur under an action prefix.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, fields
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .canon_set import FinSet, order_key
from .glts import Glts
from .limits import DEFAULT, LimitExceeded, Limits


class CcsError(ValueError):
    pass


class CcsSyntaxError(CcsError):
    def __init__(self, message: str, offset: int, line: Optional[int] = None):
        where = f"line {line}, offset {offset}" if line is not None else f"offset {offset}"
        super().__init__(f"{message} at {where}")
        self.offset = offset
        self.line = line


class ScopeError(CcsError):
    pass


class GuardednessError(CcsError):
    def __init__(self, var: str):
        super().__init__(f"recursion variable {var!r} occurs unguarded (not under an action prefix)")
        self.var = var


# ---------------------------------------------------------------------------
# syntax


class _Node:
    def _order_key(self):
        return tuple(order_key(getattr(self, f.name)) for f in fields(self) if f.compare)


@dataclass(frozen=True)
class Label(_Node):
    kind: str  # "in", "out" or "tau"
    name: int = -1

    def __post_init__(self):
        if self.kind not in ("in", "out", "tau"):
            raise ValueError(f"bad label kind {self.kind!r}")

    def _order_key(self):
        return (("in", "out", "tau").index(self.kind), self.name)

    def complement(self, other: "Label") -> bool:
        return (
            self.kind != "tau"
            and other.kind != "tau"
            and self.kind != other.kind
            and self.name == other.name
        )


def In(m: int) -> Label:
    return Label("in", m)


def Out(m: int) -> Label:
    return Label("out", m)


TAU = Label("tau")


@dataclass(frozen=True)
class Nil(_Node):
    pass


@dataclass(frozen=True)
class Prefix(_Node):
    label: Label
    cont: "Process"


@dataclass(frozen=True)
class Sum(_Node):
    left: "Process"
    right: "Process"


@dataclass(frozen=True)
class Par(_Node):
    left: "Process"
    right: "Process"


@dataclass(frozen=True)
class Nu(_Node):
    body: "Process"
    hint: str = field(default="c", compare=False)


@dataclass(frozen=True)
class Var(_Node):
    index: int
    hint: str = field(default="X", compare=False)


@dataclass(frozen=True)
class Mu(_Node):
    body: "Process"
    hint: str = field(default="X", compare=False)


Process = Nil | Prefix | Sum | Par | Nu | Var | Mu

NIL = Nil()


def max_name(p: Process) -> int:
    """Largest channel name used in ``p``, or -1."""
    match p:
        case Nil() | Var():
            return -1
        case Prefix(label, cont):
            return max(label.name, max_name(cont))
        case Sum(l, r) | Par(l, r):
            return max(max_name(l), max_name(r))
        case Nu(body) | Mu(body):
            return max_name(body)
    raise TypeError(p)


def well_scoped(p: Process, n: int, rec_depth: int = 0) -> bool:
    match p:
        case Nil():
            return True
        case Prefix(label, cont):
            return label.name < n and well_scoped(cont, n, rec_depth)
        case Sum(l, r) | Par(l, r):
            return well_scoped(l, n, rec_depth) and well_scoped(r, n, rec_depth)
        case Nu(body):
            return well_scoped(body, n + 1, rec_depth)
        case Var(k):
            return k < rec_depth
        case Mu(body):
            return well_scoped(body, n, rec_depth + 1)
    raise TypeError(p)


def _unguarded(p: Process) -> set:
    match p:
        case Nil() | Prefix():
            return set()
        case Sum(l, r) | Par(l, r):
            return _unguarded(l) | _unguarded(r)
        case Nu(body):
            return _unguarded(body)
        case Var(k):
            return {k}
        case Mu(body):
            return {k - 1 for k in _unguarded(body) if k > 0}
    raise TypeError(p)


def check_guarded(p: Process) -> None:
    """Raise :class:`GuardednessError` if some ``Mu`` variable occurs outside a prefix."""
    match p:
        case Nil() | Var():
            return
        case Prefix(_, cont):
            check_guarded(cont)
        case Sum(l, r) | Par(l, r):
            check_guarded(l)
            check_guarded(r)
        case Nu(body):
            check_guarded(body)
        case Mu(body, hint):
            if 0 in _unguarded(body):
                raise GuardednessError(hint)
            check_guarded(body)


def is_guarded(p: Process) -> bool:
    try:
        check_guarded(p)
    except GuardednessError:
        return False
    return True


# ---------------------------------------------------------------------------
# substitution


def shift_bound(p: Process, cutoff: int, by: int) -> Process:
    """Add ``by`` to every channel name ``>= cutoff``.

    Moving a term from scope ``cutoff`` to scope ``cutoff + by`` leaves its
    free names alone; the names its own ``Nu`` binders introduce start at
    ``cutoff`` and must move up.
    """
    if by == 0:
        return p
    match p:
        case Nil() | Var():
            return p
        case Prefix(label, cont):
            if label.kind != "tau" and label.name >= cutoff:
                label = Label(label.kind, label.name + by)
            return Prefix(label, shift_bound(cont, cutoff, by))
        case Sum(l, r):
            return Sum(shift_bound(l, cutoff, by), shift_bound(r, cutoff, by))
        case Par(l, r):
            return Par(shift_bound(l, cutoff, by), shift_bound(r, cutoff, by))
        case Nu(body, hint):
            return Nu(shift_bound(body, cutoff, by), hint)
        case Mu(body, hint):
            return Mu(shift_bound(body, cutoff, by), hint)
    raise TypeError(p)


def subst(p: Process, q: Process, var: int = 0, scope: int = 0) -> Process:
    """Replace recursion variable ``var`` in ``p`` by ``q``.

    ``p`` and ``q`` both live at channel scope ``scope``; ``q`` must have no free
    recursion variables.  Variables above ``var`` are decremented, since the
    binder of ``var`` disappears.  Each copy of ``q`` is moved to the channel
    scope of its occurrence.
    """
    return _subst(p, q, var, scope, scope)


def _subst(p: Process, q: Process, var: int, scope: int, depth: int) -> Process:
    match p:
        case Nil():
            return p
        case Var(k, hint):
            if k == var:
                return shift_bound(q, scope, depth - scope)
            return Var(k - 1, hint) if k > var else p
        case Prefix(label, cont):
            return Prefix(label, _subst(cont, q, var, scope, depth))
        case Sum(l, r):
            return Sum(_subst(l, q, var, scope, depth), _subst(r, q, var, scope, depth))
        case Par(l, r):
            return Par(_subst(l, q, var, scope, depth), _subst(r, q, var, scope, depth))
        case Nu(body, hint):
            return Nu(_subst(body, q, var, scope, depth + 1), hint)
        case Mu(body, hint):
            return Mu(_subst(body, q, var + 1, scope, depth), hint)
    raise TypeError(p)


def unfold(p: Mu, scope: int = 0) -> Process:
    return subst(p.body, p, 0, scope)


# ---------------------------------------------------------------------------
# transitions


def act_left(u: FinSet, q: Process) -> FinSet:
    """``{(l, p' | q) | (l, p') in u}``"""
    return FinSet((l, Par(p1, q)) for l, p1 in u)


def act_right(p: Process, u: FinSet) -> FinSet:
    """``{(l, p | q') | (l, q') in u}``"""
    return FinSet((l, Par(p, q1)) for l, q1 in u)


def synch(u: FinSet, v: FinSet) -> FinSet:
    """A tau step ``p' | q'`` for every complementary pair of moves."""
    return FinSet((TAU, Par(p1, q1)) for a, p1 in u for b, q1 in v if a.complement(b))


def act_nu(u: FinSet, n: int, hint: str = "c") -> FinSet:
    """Hide channel ``n``: drop moves on ``n`` or its output and re-bind the rest.

    ``u`` holds moves of a scope-``n+1`` body; the surviving labels already use
    names below ``n`` and pass through unchanged.
    """
    return FinSet((l, Nu(p1, hint)) for l, p1 in u if l.kind == "tau" or l.name != n)


@lru_cache(maxsize=200_000)
def act(p: Process, n: int = 0) -> FinSet:
    """The moves of a closed, guarded term at channel scope ``n``."""
    match p:
        case Nil():
            return FinSet()
        case Prefix(label, cont):
            return FinSet([(label, cont)])
        case Sum(l, r):
            return act(l, n) | act(r, n)
        case Par(l, r):
            ul, ur = act(l, n), act(r, n)
            return act_left(ul, r) | act_right(l, ur) | synch(ul, ur)
        case Nu(body, hint):
            return act_nu(act(body, n + 1), n, hint)
        case Mu():
            return act(unfold(p, n), n)
        case Var(_, hint):
            raise CcsError(f"act on a term with free recursion variable {hint!r}")
    raise TypeError(p)


# ---------------------------------------------------------------------------
# printing


KEYWORDS = {"nu", "mu", "tau", "tt", "ff"}


def _fresh(hint: str, taken: set) -> str:
    base = hint if hint and hint not in KEYWORDS else "c"
    name, i = base, 1
    while name in taken or name in KEYWORDS:
        name = f"{base}{i}"
        i += 1
    return name


def label_text(label: Label, names: Sequence[str]) -> str:
    if label.kind == "tau":
        return "tau"
    text = names[label.name] if label.name < len(names) else f"_{label.name}"
    return text if label.kind == "in" else "'" + text


def pretty(p: Process, names: Sequence[str] = ()) -> str:
    """Parseable text for ``p``; ``names`` spells the free channels ``0, 1, ...``."""
    return _pp(p, list(names), [], -1)


def _pp(p: Process, chans: list, rvars: list, lvl: int) -> str:
    match p:
        case Nil():
            return "0"
        case Prefix(label, cont):
            return f"{label_text(label, chans)}.{_pp(cont, chans, rvars, 2)}"
        case Sum(l, r):
            s = f"{_pp(l, chans, rvars, 1)} + {_pp(r, chans, rvars, 2)}"
            return f"({s})" if lvl > 1 else s
        case Par(l, r):
            s = f"{_pp(l, chans, rvars, 0)} | {_pp(r, chans, rvars, 1)}"
            return f"({s})" if lvl > 0 else s
        case Nu(body, hint):
            c = _fresh(hint, set(chans) | set(rvars))
            s = f"nu {c}. {_pp(body, chans + [c], rvars, -1)}"
            return f"({s})" if lvl >= 0 else s
        case Mu(body, hint):
            v = _fresh(hint, set(chans) | set(rvars))
            s = f"mu {v}. {_pp(body, chans, [v] + rvars, -1)}"
            return f"({s})" if lvl >= 0 else s
        case Var(k, hint):
            return rvars[k] if k < len(rvars) else f"?{hint}{k}"
    raise TypeError(p)


# ---------------------------------------------------------------------------
# parsing
#
#   par    := sum ('|' sum)*
#   sum    := pre ('+' pre)*
#   pre    := action '.' pre | 'nu' ID '.' par | 'mu' ID '.' par | atom
#   atom   := '0' | '(' par ')' | action
#   action := ID | "'" ID | 'tau'
#
# A bare identifier is a recursion variable if one is in scope, otherwise a
# reference to another definition, otherwise shorthand for ``a.0``.


@dataclass(frozen=True)
class _NAct:
    kind: str
    chan: str
    cont: object
    pos: int


@dataclass(frozen=True)
class _NBin:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class _NBind:
    op: str  # "nu" or "mu"
    name: str
    body: object


@dataclass(frozen=True)
class _NRef:
    kind: str
    name: str
    pos: int


@dataclass(frozen=True)
class _NNil:
    pass


_TOK = re.compile(r"(?P<id>[A-Za-z_][A-Za-z0-9_]*)|(?P<num>0)|(?P<sym>\|\||[|+.()'∥])")


def _tokenize(src: str) -> list:
    toks, pos = [], 0
    while pos < len(src):
        if src[pos].isspace():
            pos += 1
            continue
        m = _TOK.match(src, pos)
        if not m:
            raise CcsSyntaxError(f"unexpected character {src[pos]!r}", pos)
        text = m.group()
        kind = "id" if m.group("id") else "0" if m.group("num") else text
        if kind in ("||", "∥"):
            kind = "|"
        if kind == "id" and text in ("nu", "mu", "tau"):
            kind = text
        toks.append((kind, text, pos))
        pos = m.end()
    toks.append(("eof", "", len(src)))
    return toks


class _Parser:
    def __init__(self, src: str):
        self.toks = _tokenize(src)
        self.i = 0

    def peek(self, k=0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def take(self, kind, what):
        tok = self.peek()
        if tok[0] != kind:
            found = "end of input" if tok[0] == "eof" else repr(tok[1])
            raise CcsSyntaxError(f"expected {what}, found {found}", tok[2])
        self.i += 1
        return tok

    def parse(self):
        t = self.par()
        tok = self.peek()
        if tok[0] != "eof":
            raise CcsSyntaxError(f"unexpected {tok[1]!r}", tok[2])
        return t

    def par(self):
        t = self.sum()
        while self.peek()[0] == "|":
            self.i += 1
            t = _NBin("|", t, self.sum())
        return t

    def sum(self):
        t = self.pre()
        while self.peek()[0] == "+":
            self.i += 1
            t = _NBin("+", t, self.pre())
        return t

    def action(self):
        kind, text, pos = self.peek()
        if kind == "'":
            self.i += 1
            _, name, _ = self.take("id", "a channel name after '")
            return ("out", name, pos)
        if kind == "tau":
            self.i += 1
            return ("tau", "", pos)
        if kind == "id":
            self.i += 1
            return ("in", text, pos)
        return None

    def pre(self):
        kind, text, pos = self.peek()
        if kind in ("nu", "mu"):
            self.i += 1
            _, name, _ = self.take("id", f"a name after {kind}")
            self.take(".", "'.'")
            return _NBind(kind, name, self.par())
        if kind == "0":
            self.i += 1
            return _NNil()
        if kind == "(":
            self.i += 1
            t = self.par()
            self.take(")", "')'")
            return t
        act = self.action()
        if act is None:
            found = "end of input" if kind == "eof" else repr(text)
            raise CcsSyntaxError(f"expected a process, found {found}", pos)
        akind, name, apos = act
        if self.peek()[0] == ".":
            self.i += 1
            return _NAct(akind, name, self.pre(), apos)
        return _NRef(akind, name, apos)


def _free_channels(t, defs: dict, chans: frozenset, rvars: frozenset, out: set, seen: frozenset):
    match t:
        case _NNil():
            return
        case _NAct(kind, chan, cont, _):
            if kind != "tau" and chan not in chans:
                out.add(chan)
            _free_channels(cont, defs, chans, rvars, out, seen)
        case _NBin(_, l, r):
            _free_channels(l, defs, chans, rvars, out, seen)
            _free_channels(r, defs, chans, rvars, out, seen)
        case _NBind("nu", name, body):
            _free_channels(body, defs, chans | {name}, rvars, out, seen)
        case _NBind("mu", name, body):
            _free_channels(body, defs, chans, rvars | {name}, out, seen)
        case _NRef(kind, name, _):
            if kind == "in" and name in rvars:
                return
            if kind == "in" and name in defs:
                if name not in seen:
                    _free_channels(defs[name], defs, chans, frozenset(), out, seen | {name})
                return
            if kind != "tau" and name not in chans:
                out.add(name)


class _Resolver:
    def __init__(self, defs: dict, free: Sequence[str]):
        self.defs = defs
        self.free = list(free)
        self.active: list = []

    def definition(self, name: str, chans: list) -> Process:
        # constants are macros: their channels bind at the use site, so an
        # enclosing nu restricts them as usual in CCS
        if name in self.active:
            cycle = " -> ".join(self.active + [name])
            raise ScopeError(f"definitions refer to each other cyclically ({cycle}); use mu for recursion")
        self.active.append(name)
        try:
            return self.resolve(self.defs[name], chans, [])
        finally:
            self.active.pop()

    def channel(self, name: str, chans: list) -> int:
        for level in range(len(chans) - 1, -1, -1):
            if chans[level] == name:
                return level
        raise ScopeError(f"unknown channel {name!r}")

    def label(self, kind: str, name: str, chans: list) -> Label:
        return TAU if kind == "tau" else Label(kind, self.channel(name, chans))

    def resolve(self, t, chans: list, rvars: list) -> Process:
        match t:
            case _NNil():
                return NIL
            case _NAct(kind, chan, cont, _):
                return Prefix(self.label(kind, chan, chans), self.resolve(cont, chans, rvars))
            case _NBin("+", l, r):
                return Sum(self.resolve(l, chans, rvars), self.resolve(r, chans, rvars))
            case _NBin("|", l, r):
                return Par(self.resolve(l, chans, rvars), self.resolve(r, chans, rvars))
            case _NBind("nu", name, body):
                return Nu(self.resolve(body, chans + [name], rvars), name)
            case _NBind("mu", name, body):
                return Mu(self.resolve(body, chans, [name] + rvars), name)
            case _NRef(kind, name, _):
                if kind == "in" and name in rvars:
                    return Var(rvars.index(name), name)
                if kind == "in" and name in self.defs:
                    return self.definition(name, chans)
                return Prefix(self.label(kind, name, chans), NIL)
        raise TypeError(t)


@dataclass(frozen=True)
class Program:
    """Named, closed, guarded processes sharing one numbering of free channels."""

    defs: dict
    channels: tuple
    order: tuple = ()

    def __getitem__(self, name: str) -> Process:
        if name not in self.defs:
            raise CcsError(f"no definition named {name!r}")
        return self.defs[name]

    def pretty(self, p: Process) -> str:
        return pretty(p, self.channels)

    def action_name(self, label: Label) -> str:
        return label_text(label, self.channels)

    def to_glts(self, roots: Iterable[str], limits: Limits = DEFAULT):
        """Compile the named definitions into one system; see :func:`to_glts`."""
        roots = list(roots)
        g, ids = to_glts([self[r] for r in roots], self.channels, limits)
        return g, {r: ids[i] for i, r in enumerate(roots)}


def parse(src: str, channels: Optional[Sequence[str]] = None) -> Process:
    """Parse one closed process.

    Free channels are numbered alphabetically unless ``channels`` fixes the
    numbering.  Raises :class:`CcsSyntaxError`, :class:`ScopeError` or
    :class:`GuardednessError`.
    """
    named = _Parser(src).parse()
    free: set = set()
    _free_channels(named, {}, frozenset(), frozenset(), free, frozenset())
    if channels is None:
        channels = sorted(free)
    else:
        missing = free - set(channels)
        if missing:
            raise ScopeError(f"channels {sorted(missing)} not in the given numbering")
    p = _Resolver({}, channels).resolve(named, list(channels), [])
    check_guarded(p)
    return p


def free_channels(src: str) -> list[str]:
    named = _Parser(src).parse()
    free: set = set()
    _free_channels(named, {}, frozenset(), frozenset(), free, frozenset())
    return sorted(free)


_DEF = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*=(.*)$")


def parse_program(text: str) -> Program:
    """Parse a ``.ccs`` file: one ``name = process`` per line, ``#`` comments."""
    named, lines, order = {}, {}, []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        m = _DEF.match(line)
        if not m:
            raise CcsSyntaxError("expected 'name = process'", 0, lineno)
        name, body = m.group(1), m.group(2)
        if name in KEYWORDS:
            raise CcsSyntaxError(f"{name!r} is reserved", 0, lineno)
        if name in named:
            raise CcsSyntaxError(f"duplicate definition {name!r}", 0, lineno)
        try:
            named[name] = _Parser(body).parse()
        except CcsSyntaxError as e:
            raise CcsSyntaxError(str(e).rsplit(" at ", 1)[0], e.offset + m.start(2), lineno) from None
        lines[name] = lineno
        order.append(name)
    free: set = set()
    for name in order:
        _free_channels(named[name], named, frozenset(), frozenset(), free, frozenset({name}))
    channels = tuple(sorted(free))
    resolver = _Resolver(named, channels)
    defs = {}
    for name in order:
        try:
            p = resolver.definition(name, list(channels))
        except ScopeError as e:
            raise ScopeError(f"line {lines[name]} ({name}): {e}") from None
        check_guarded(p)
        defs[name] = p
    return Program(defs, channels, tuple(order))


# ---------------------------------------------------------------------------
# compilation


def to_glts(
    roots: Process | Sequence[Process],
    channels: Sequence[str] = (),
    limits: Limits = DEFAULT,
    state_limit: Optional[int] = None,
):
    """Explore the terms reachable from ``roots`` through ``act``.

    States are terms up to structural equality (no structural congruence),
    numbered ``s0, s1, ...`` in breadth-first order with each frontier sorted
    canonically.  Returns the system and the list of root state ids.
    Raises :class:`LimitExceeded` when more than ``state_limit`` (default
    ``limits.states``) terms are reached.
    """
    if not isinstance(roots, (list, tuple)):
        roots = [roots]
    limit = limits.states if state_limit is None else state_limit
    n = len(channels)
    for r in roots:
        if not well_scoped(r, n):
            raise ScopeError(f"{pretty(r, channels)} is not closed at scope {n}")
        check_guarded(r)
    ids: dict = {}

    def intern(p):
        if p not in ids:
            if len(ids) >= limit:
                raise LimitExceeded(f"more than {limit} states reachable")
            ids[p] = f"s{len(ids)}"
        return ids[p]

    root_ids = [intern(r) for r in roots]
    frontier = sorted(set(roots), key=order_key)
    moves: dict = {}
    while frontier:
        nxt = set()
        for p in frontier:
            out = act(p, n)
            moves[p] = out
            for _, p1 in out:
                if p1 not in ids:
                    nxt.add(p1)
        frontier = sorted(nxt, key=order_key)
        for p in frontier:
            intern(p)
    triples, actions = [], set()
    for p, out in moves.items():
        for label, p1 in out:
            a = label_text(label, channels)
            actions.add(a)
            triples.append((ids[p], a, ids[p1]))
    names = {sid: pretty(p, channels) for p, sid in ids.items()}
    return Glts.build(ids.values(), actions, triples, names), root_ids
