"""Exact integer-set algebra: Minkowski sums, product sets, lattice operations.

A :class:`DegreeSet` is either a finite set of integers (stored as a sorted
tuple) or the whole of the integers.  These are the values that degree-set
computations produce, and every operation here is exact: there is no
truncation, approximation, or silent wrap-around.

The representation is deliberately naive -- explicit sorted element lists,
not interval unions -- because every construction in this package yields
desk-scale sets (at most a few thousand elements) and the module doubles as
the correctness oracle for everything built on top of it.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from typing import Iterable, Iterator

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1


class IntegerOverflow(ArithmeticError):
    """An operation produced an element outside the signed 64-bit range."""


class UnrepresentableSet(ValueError):
    """The exact result is a proper sublattice of Z and cannot be stored.

    Raised by :func:`product_set` when all of Z is multiplied by a finite
    set containing an element of absolute value >= 2: the true result would
    be a union of residue classes, which this representation does not model.
    """


class InvalidInterval(ValueError):
    """interval(lo, hi) was called with lo > hi."""


def _check_element(x: int) -> int:
    if not isinstance(x, int) or isinstance(x, bool):
        raise TypeError(f"set elements must be integers, got {x!r}")
    if x < INT64_MIN or x > INT64_MAX:
        raise IntegerOverflow(f"element {x} exceeds the signed 64-bit range")
    return x


@dataclass(frozen=True)
class DegreeSet:
    """A finite set of integers, or all of Z.

    ``elements`` is a strictly increasing tuple when the set is finite and
    ``None`` when the set is all of Z.  The empty finite set is a legal
    algebraic value (it absorbs sums and products); callers that need
    non-emptiness enforce it themselves.
    """

    elements: tuple[int, ...] | None

    def __post_init__(self) -> None:
        elements = self.elements
        if elements is None:
            return
        if not all(type(x) is int for x in elements):
            raise TypeError("set elements must be integers")
        if elements and (elements[0] < INT64_MIN or elements[-1] > INT64_MAX):
            # sorted representation: checking the endpoints covers the rest
            _check_element(elements[0])
            _check_element(elements[-1])
        if any(a >= b for a, b in zip(elements, elements[1:])):
            raise ValueError("elements must be strictly increasing")

    @classmethod
    def finite(cls, values: Iterable[int]) -> DegreeSet:
        return cls(tuple(sorted(set(values))))

    @classmethod
    def all_integers(cls) -> DegreeSet:
        return cls(None)

    @property
    def is_all(self) -> bool:
        return self.elements is None

    @property
    def is_empty(self) -> bool:
        return self.elements is not None and len(self.elements) == 0

    @property
    def kind(self) -> str:
        return "all_integers" if self.is_all else "finite"

    def __contains__(self, d: int) -> bool:
        return contains(self, d)

    def __iter__(self) -> Iterator[int]:
        if self.is_all:
            raise TypeError("cannot iterate over all integers")
        return iter(self.elements)

    def __str__(self) -> str:
        if self.is_all:
            return "Z"
        return "{" + ", ".join(str(x) for x in self.elements) + "}"


ALL_INTEGERS = DegreeSet.all_integers()
EMPTY = DegreeSet.finite(())
ZERO_ONLY = DegreeSet.finite((0,))


def sumset(a: DegreeSet, b: DegreeSet) -> DegreeSet:
    """Minkowski sum {x + y | x in a, y in b}."""
    if a.is_empty or b.is_empty:
        return EMPTY
    if a.is_all or b.is_all:
        return ALL_INTEGERS
    return DegreeSet.finite(x + y for x in a.elements for y in b.elements)


def product_set(a: DegreeSet, b: DegreeSet) -> DegreeSet:
    """Product set {x * y | x in a, y in b}.

    All-of-Z operands are accepted only when the result stays representable:
    Z * Z = Z, and Z times a subset of {-1, 0, 1} is Z, {0}, or empty.
    """
    if a.is_empty or b.is_empty:
        return EMPTY
    if a.is_all and b.is_all:
        return ALL_INTEGERS
    if a.is_all or b.is_all:
        fin = b if a.is_all else a
        if any(abs(x) >= 2 for x in fin.elements):
            raise UnrepresentableSet(
                f"Z * {fin} is a proper sublattice of Z and has no finite representation"
            )
        if any(abs(x) == 1 for x in fin.elements):
            return ALL_INTEGERS
        return ZERO_ONLY
    return DegreeSet.finite(x * y for x in a.elements for y in b.elements)


def intersect(a: DegreeSet, b: DegreeSet) -> DegreeSet:
    if a.is_all:
        return b
    if b.is_all:
        return a
    other = set(b.elements)
    return DegreeSet(tuple(x for x in a.elements if x in other))


def union(a: DegreeSet, b: DegreeSet) -> DegreeSet:
    if a.is_all or b.is_all:
        return ALL_INTEGERS
    return DegreeSet.finite(a.elements + b.elements)


def negate(a: DegreeSet) -> DegreeSet:
    if a.is_all:
        return ALL_INTEGERS
    return DegreeSet(tuple(-x for x in reversed(a.elements)))


def contains(a: DegreeSet, d: int) -> bool:
    if a.is_all:
        return True
    idx = bisect_left(a.elements, d)
    return idx < len(a.elements) and a.elements[idx] == d


def equals(a: DegreeSet, b: DegreeSet) -> bool:
    return a.elements == b.elements


def interval(lo: int, hi: int) -> DegreeSet:
    """The integer interval {lo, lo+1, ..., hi}."""
    if lo > hi:
        raise InvalidInterval(f"interval bounds out of order: [{lo}, {hi}]")
    _check_element(lo)
    _check_element(hi)
    return DegreeSet(tuple(range(lo, hi + 1)))


def to_jsonable(a: DegreeSet) -> dict:
    if a.is_all:
        return {"kind": "all_integers"}
    return {"kind": "finite", "elements": list(a.elements)}


def from_jsonable(obj: object) -> DegreeSet:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValueError(f"not a serialized integer set: {obj!r}")
    if obj["kind"] == "all_integers":
        return ALL_INTEGERS
    if obj["kind"] == "finite":
        elements = obj.get("elements")
        if not isinstance(elements, list) or not all(
            isinstance(x, int) and not isinstance(x, bool) for x in elements
        ):
            raise ValueError(f"bad element list: {elements!r}")
        return DegreeSet.finite(elements)
    raise ValueError(f"unknown set kind: {obj['kind']!r}")
