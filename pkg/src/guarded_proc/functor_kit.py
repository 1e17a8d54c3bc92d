"""Container functors, their action on maps, and relation lifting.

Values of ``F(X)`` are plain Python data shaped by the functor expression:

* ``ConstFin(U)`` -- an atom from ``U``
* ``Id()``        -- an element of the carrier ``X``
* ``Prod(F, G)``  -- a pair ``(l, r)``
* ``Sum(F, G)``   -- ``Tagged(0, l)`` or ``Tagged(1, r)``
* ``Pfin(F)``     -- a :class:`FinSet` of ``F`` values

There is no node for the later modality.  A delayed position is an ordinary
``Id`` position; callers that need the guarded reading pass the previous
level's relation (see :mod:`guarded_proc.bisim`).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Any, Callable, Hashable, Iterable, Optional

from .canon_set import FinSet, order_key
from .limits import DEFAULT, LimitExceeded, Limits


class ShapeError(ValueError):
    """A value does not have the shape its functor expression demands."""


@dataclass(frozen=True)
class ConstFin:
    universe: FinSet

    def __str__(self):
        return f"Const{self.universe}"


@dataclass(frozen=True)
class Id:
    def __str__(self):
        return "Id"


@dataclass(frozen=True)
class Prod:
    left: "FunctorExpr"
    right: "FunctorExpr"

    def __str__(self):
        return f"({self.left} x {self.right})"


@dataclass(frozen=True)
class Sum:
    left: "FunctorExpr"
    right: "FunctorExpr"

    def __str__(self):
        return f"({self.left} + {self.right})"


@dataclass(frozen=True)
class Pfin:
    inner: "FunctorExpr"

    def __str__(self):
        return f"Pfin({self.inner})"


FunctorExpr = ConstFin | Id | Prod | Sum | Pfin


@dataclass(frozen=True)
class Tagged:
    """Injection into a binary sum: tag 0 is left, tag 1 is right."""

    tag: int
    value: Any

    def _order_key(self):
        return (self.tag, order_key(self.value))

    def __str__(self):
        return f"in{self.tag}({self.value})"


def glts_functor(actions: Iterable[str]) -> FunctorExpr:
    """``Pfin(Const(actions) x Id)``, the functor whose coalgebras are GLTSs."""
    return Pfin(Prod(ConstFin(FinSet(actions)), Id()))


# ---------------------------------------------------------------------------
# relations


@dataclass(frozen=True)
class Relation:
    """Proof-irrelevant relation between two finite sets."""

    domain: FinSet
    codomain: FinSet
    pairs: FinSet

    def __post_init__(self):
        for p in self.pairs:
            if not (isinstance(p, tuple) and len(p) == 2):
                raise ValueError(f"relation entry {p!r} is not a pair")
            if p[0] not in self.domain or p[1] not in self.codomain:
                raise ValueError(f"pair {p!r} outside domain x codomain")
        object.__setattr__(self, "_lookup", frozenset(self.pairs))

    @classmethod
    def of(cls, domain: Iterable, codomain: Iterable, pairs: Iterable) -> "Relation":
        return cls(FinSet(domain), FinSet(codomain), FinSet(tuple(p) for p in pairs))

    @classmethod
    def identity(cls, carrier: Iterable) -> "Relation":
        carrier = FinSet(carrier)
        return cls(carrier, carrier, FinSet((x, x) for x in carrier))

    @classmethod
    def total(cls, domain: Iterable, codomain: Iterable) -> "Relation":
        domain, codomain = FinSet(domain), FinSet(codomain)
        return cls(domain, codomain, FinSet(itertools.product(domain, codomain)))

    @classmethod
    def from_predicate(cls, domain: Iterable, codomain: Iterable, pred) -> "Relation":
        domain, codomain = FinSet(domain), FinSet(codomain)
        return cls(
            domain,
            codomain,
            FinSet((x, y) for x in domain for y in codomain if pred(x, y)),
        )

    def __call__(self, x, y) -> bool:
        return (x, y) in self._lookup

    def graph(self) -> FinSet:
        """The carrier ``tot R`` of related pairs."""
        return self.pairs

    def issubset(self, other: "Relation") -> bool:
        return self._lookup <= other._lookup

    def __len__(self):
        return len(self.pairs)


def proj0(pair):
    return pair[0]


def proj1(pair):
    return pair[1]


# ---------------------------------------------------------------------------
# functorial action and enumeration


def fmap(F: FunctorExpr, f: Callable[[Hashable], Hashable], v: Any) -> Any:
    """Apply ``f`` at every ``Id`` leaf of ``v``; Pfin nodes are re-canonicalised."""
    match F:
        case ConstFin(universe):
            if v not in universe:
                raise ShapeError(f"{v!r} is not an atom of {universe}")
            return v
        case Id():
            return f(v)
        case Prod(left, right):
            if not (isinstance(v, tuple) and len(v) == 2):
                raise ShapeError(f"expected a pair for {F}, got {v!r}")
            return (fmap(left, f, v[0]), fmap(right, f, v[1]))
        case Sum(left, right):
            if not isinstance(v, Tagged) or v.tag not in (0, 1):
                raise ShapeError(f"expected a tagged value for {F}, got {v!r}")
            return Tagged(v.tag, fmap(left if v.tag == 0 else right, f, v.value))
        case Pfin(inner):
            if not isinstance(v, FinSet):
                raise ShapeError(f"expected a FinSet for {F}, got {v!r}")
            return FinSet(fmap(inner, f, e) for e in v)
    raise ShapeError(f"unknown functor expression {F!r}")


def _count(F: FunctorExpr, n_carrier: int, budget: int) -> int:
    match F:
        case ConstFin(universe):
            return len(universe)
        case Id():
            return n_carrier
        case Prod(left, right):
            return _count(left, n_carrier, budget) * _count(right, n_carrier, budget)
        case Sum(left, right):
            return _count(left, n_carrier, budget) + _count(right, n_carrier, budget)
        case Pfin(inner):
            m = _count(inner, n_carrier, budget)
            return sum(math.comb(m, k) for k in range(min(m, budget) + 1))
    raise ShapeError(f"unknown functor expression {F!r}")


def enumerate_values(
    F: FunctorExpr, carrier: Iterable, budget: int, limits: Limits = DEFAULT
) -> list:
    """All values of ``F(carrier)`` whose Pfin nodes each have at most ``budget`` members.

    Raises :class:`LimitExceeded` instead of truncating.
    """
    if budget < 0:
        raise ValueError("budget must be non-negative")
    carrier = FinSet(carrier)
    if len(carrier) > limits.carrier:
        raise LimitExceeded(f"carrier of size {len(carrier)} exceeds {limits.carrier}")
    # intermediate counts can be astronomically large; compare before building
    total = _count(F, len(carrier), budget)
    if total > limits.enumeration:
        raise LimitExceeded(f"{total} values of {F} exceed {limits.enumeration}")
    return _enum(F, carrier, budget)


def _enum(F: FunctorExpr, carrier: FinSet, budget: int) -> list:
    match F:
        case ConstFin(universe):
            return list(universe)
        case Id():
            return list(carrier)
        case Prod(left, right):
            return list(itertools.product(_enum(left, carrier, budget), _enum(right, carrier, budget)))
        case Sum(left, right):
            return [Tagged(0, v) for v in _enum(left, carrier, budget)] + [
                Tagged(1, v) for v in _enum(right, carrier, budget)
            ]
        case Pfin(inner):
            elems = _enum(inner, carrier, budget)
            return [
                FinSet(combo)
                for k in range(min(len(elems), budget) + 1)
                for combo in itertools.combinations(elems, k)
            ]
    raise ShapeError(f"unknown functor expression {F!r}")


# ---------------------------------------------------------------------------
# relation lifting


def rel_lift_bf(F: FunctorExpr, R: Relation, u: Any, v: Any) -> bool:
    """Back-and-forth decision of the lifted relation, by structural recursion."""
    match F:
        case ConstFin(universe):
            if u not in universe or v not in universe:
                raise ShapeError(f"atoms {u!r}, {v!r} not in {universe}")
            return u == v
        case Id():
            return R(u, v)
        case Prod(left, right):
            _pair_shape(F, u, v)
            return rel_lift_bf(left, R, u[0], v[0]) and rel_lift_bf(right, R, u[1], v[1])
        case Sum(left, right):
            _tag_shape(F, u, v)
            if u.tag != v.tag:
                return False
            return rel_lift_bf(left if u.tag == 0 else right, R, u.value, v.value)
        case Pfin(inner):
            _set_shape(F, u, v)
            forth = all(any(rel_lift_bf(inner, R, s, t) for t in v) for s in u)
            back = all(any(rel_lift_bf(inner, R, s, t) for s in u) for t in v)
            return forth and back
    raise ShapeError(f"unknown functor expression {F!r}")


def _lift_witness(F: FunctorExpr, R: Relation, u: Any, v: Any) -> Optional[Any]:
    match F:
        case ConstFin():
            return u if u == v else None
        case Id():
            return (u, v) if R(u, v) else None
        case Prod(left, right):
            _pair_shape(F, u, v)
            wl = _lift_witness(left, R, u[0], v[0])
            if wl is None:
                return None
            wr = _lift_witness(right, R, u[1], v[1])
            return None if wr is None else (wl, wr)
        case Sum(left, right):
            _tag_shape(F, u, v)
            if u.tag != v.tag:
                return None
            w = _lift_witness(left if u.tag == 0 else right, R, u.value, v.value)
            return None if w is None else Tagged(u.tag, w)
        case Pfin(inner):
            _set_shape(F, u, v)
            # one witness per related pair already has the largest possible projections
            found = []
            for s in u:
                for t in v:
                    w = _lift_witness(inner, R, s, t)
                    if w is not None:
                        found.append(w)
            found = FinSet(found)
            if fmap(F, proj0, found) != u or fmap(F, proj1, found) != v:
                return None
            return found
    raise ShapeError(f"unknown functor expression {F!r}")


def rel_lift_witness(F: FunctorExpr, R: Relation, u: Any, v: Any) -> Optional[Any]:
    """A value ``t`` of ``F(tot R)`` with ``F proj0 t == u`` and ``F proj1 t == v``.

    Returns ``None`` when no such value exists.  A returned witness has been
    checked against both projection equations.
    """
    t = _lift_witness(F, R, u, v)
    if t is None:
        return None
    if fmap(F, proj0, t) == u and fmap(F, proj1, t) == v:
        return t
    return None


def all_witnesses(
    F: FunctorExpr, R: Relation, u: Any, v: Any, limits: Limits = DEFAULT
) -> list:
    """Every value of ``F(tot R)`` projecting to ``u`` and ``v``, by brute force.

    At a Pfin node all subsets of the candidate witnesses are tried, so the
    search is exponential; the subset count is capped by
    ``limits.witness_space``.
    """
    match F:
        case ConstFin():
            return [u] if u == v else []
        case Id():
            return [(u, v)] if R(u, v) else []
        case Prod(left, right):
            _pair_shape(F, u, v)
            return list(
                itertools.product(
                    all_witnesses(left, R, u[0], v[0], limits),
                    all_witnesses(right, R, u[1], v[1], limits),
                )
            )
        case Sum(left, right):
            _tag_shape(F, u, v)
            if u.tag != v.tag:
                return []
            sub = left if u.tag == 0 else right
            return [Tagged(u.tag, w) for w in all_witnesses(sub, R, u.value, v.value, limits)]
        case Pfin(inner):
            _set_shape(F, u, v)
            candidates = [
                w for s in u for t in v for w in all_witnesses(inner, R, s, t, limits)
            ]
            if 2 ** len(candidates) > limits.witness_space:
                raise LimitExceeded(
                    f"2^{len(candidates)} candidate subsets exceed {limits.witness_space}"
                )
            out = []
            for mask in range(2 ** len(candidates)):
                chosen = FinSet(c for i, c in enumerate(candidates) if mask >> i & 1)
                if fmap(F, proj0, chosen) == u and fmap(F, proj1, chosen) == v:
                    out.append(chosen)
            return out
    raise ShapeError(f"unknown functor expression {F!r}")


def witness_count(F: FunctorExpr, R: Relation, u: Any, v: Any, limits: Limits = DEFAULT) -> int:
    """Number of distinct lifting witnesses (the size of the untruncated lifting)."""
    return len(all_witnesses(F, R, u, v, limits))


def _pair_shape(F, u, v):
    for w in (u, v):
        if not (isinstance(w, tuple) and len(w) == 2):
            raise ShapeError(f"expected a pair for {F}, got {w!r}")


def _tag_shape(F, u, v):
    for w in (u, v):
        if not isinstance(w, Tagged):
            raise ShapeError(f"expected a tagged value for {F}, got {w!r}")


def _set_shape(F, u, v):
    for w in (u, v):
        if not isinstance(w, FinSet):
            raise ShapeError(f"expected a FinSet for {F}, got {w!r}")
