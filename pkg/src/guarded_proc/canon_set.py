"""Canonical finite sets.

A ``FinSet`` stores its members as a strictly increasing tuple under a fixed
total order (see :func:`order_key`).  Two finite sets with the same members
therefore have the same representation, so the semilattice laws
(unit, associativity, idempotence, commutativity) hold as plain ``==``.
"""

from __future__ import annotations

from typing import Any, Callable, Generic, Iterable, Iterator, Optional, TypeVar

T = TypeVar("T")
U = TypeVar("U")


def order_key(value: Any) -> tuple:
    """Sort key realising the global element order.

    Booleans and integers come first, then strings, then tuples
    (lexicographically), then finite sets (by their element sequence), then
    objects that define ``_order_key`` (grouped by class name).
    """
    if isinstance(value, bool):
        return (0, int(value))
    if isinstance(value, int):
        return (0, value)
    if isinstance(value, str):
        return (1, value)
    if isinstance(value, tuple):
        return (2, tuple(order_key(v) for v in value))
    if isinstance(value, FinSet):
        return value._order_key()
    key = getattr(value, "_order_key", None)
    if key is not None:
        return (4, type(value).__name__, key())
    raise TypeError(f"no canonical order for {value!r}")


class FinSet(Generic[T]):
    """Immutable finite set in canonical (sorted, duplicate-free) form."""

    __slots__ = ("elems", "_hash", "_key")

    def __init__(self, items: Iterable[T] = ()):
        keyed = {}
        for item in items:
            k = order_key(item)
            keyed.setdefault(k, item)
        object.__setattr__(self, "elems", tuple(keyed[k] for k in sorted(keyed)))
        object.__setattr__(self, "_hash", None)
        object.__setattr__(self, "_key", None)

    @classmethod
    def _presorted(cls, elems: tuple) -> "FinSet[T]":
        s = cls.__new__(cls)
        object.__setattr__(s, "elems", elems)
        object.__setattr__(s, "_hash", None)
        object.__setattr__(s, "_key", None)
        return s

    def __setattr__(self, name, value):
        raise AttributeError("FinSet is immutable")

    def __iter__(self) -> Iterator[T]:
        return iter(self.elems)

    def __len__(self) -> int:
        return len(self.elems)

    def __bool__(self) -> bool:
        return bool(self.elems)

    def __contains__(self, item: object) -> bool:
        return member(item, self)

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, FinSet):
            return NotImplemented
        return hash(self) == hash(other) and self.elems == other.elems

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash(("FinSet", self.elems))
            object.__setattr__(self, "_hash", h)
        return h

    def _order_key(self) -> tuple:
        k = self._key
        if k is None:
            k = (3, tuple(order_key(e) for e in self.elems))
            object.__setattr__(self, "_key", k)
        return k

    def __or__(self, other: "FinSet[T]") -> "FinSet[T]":
        return union(self, other)

    def __le__(self, other: "FinSet[T]") -> bool:
        return subset(self, other)

    def __repr__(self) -> str:
        return f"FinSet({list(self.elems)!r})"

    def __str__(self) -> str:
        return render(self)


_EMPTY: FinSet = FinSet()


def empty() -> FinSet:
    return _EMPTY


def singleton(a: T) -> FinSet[T]:
    order_key(a)  # reject unorderable elements early
    return FinSet._presorted((a,))


def from_iter(items: Iterable[T]) -> FinSet[T]:
    return FinSet(items)


def union(x: FinSet[T], y: FinSet[T]) -> FinSet[T]:
    if not x:
        return y
    if not y:
        return x
    return FinSet(x.elems + y.elems)


def member(a: object, x: FinSet) -> bool:
    return any(a == e for e in x.elems)


def subset(x: FinSet, y: FinSet) -> bool:
    return all(member(a, y) for a in x.elems)


def fmap(f: Callable[[T], U], x: FinSet[T]) -> FinSet[U]:
    """Image of ``x`` under ``f``, re-canonicalised."""
    return FinSet(f(a) for a in x.elems)


def preimage_witness(f: Callable[[T], U], x: FinSet[T], b: U) -> Optional[T]:
    """Order-least ``a`` in ``x`` with ``f(a) == b``, or ``None``.

    Scanning in canonical order makes the choice deterministic; any member
    with the right image would do.
    """
    for a in x.elems:
        if f(a) == b:
            return a
    return None


def render(value: Any) -> str:
    """Text form used by the CLI: ``{e1, e2}`` for sets, ``(a, b)`` for pairs."""
    if isinstance(value, FinSet):
        return "{" + ", ".join(render(e) for e in value.elems) + "}"
    if isinstance(value, tuple):
        return "(" + ", ".join(render(e) for e in value) + ")"
    return str(value)
