"""Manifold expression trees and the topological predicates the rules need.

The expression language covers exactly the families the degree calculus
handles: the circle, closed oriented surfaces, oriented circle bundles over
hyperbolic surfaces, connected sums, and direct products.  Values are
immutable and hashable; :func:`normalize` puts them in a canonical form
(flattened, sorted, singleton sums collapsed) so that structurally equal
manifolds compare equal.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Union


class MalformedExpr(ValueError):
    """The expression violates a structural invariant."""


class UnsupportedExpression(ValueError):
    """A predicate was asked about an expression it cannot decide."""


@dataclass(frozen=True)
class Circle:
    """The circle S^1 (dimension 1)."""


@dataclass(frozen=True)
class Surface:
    """The closed oriented surface of the given genus (dimension 2)."""

    genus: int

    def __post_init__(self) -> None:
        if self.genus < 0:
            raise MalformedExpr(f"surface genus must be >= 0, got {self.genus}")


@dataclass(frozen=True)
class CircleBundle:
    """The oriented circle bundle over a hyperbolic surface (dimension 3).

    ``base_genus`` must be at least 2: the degree-set rules for these
    bundles rely on the base being hyperbolic.
    """

    base_genus: int
    euler: int

    def __post_init__(self) -> None:
        if self.base_genus < 2:
            raise MalformedExpr(
                f"circle bundle base genus must be >= 2, got {self.base_genus}"
            )


@dataclass(frozen=True)
class ConnSum:
    """Connected sum of equal-dimension manifolds of dimension >= 2."""

    summands: tuple["ManifoldExpr", ...]

    def __post_init__(self) -> None:
        if not self.summands:
            raise MalformedExpr("connected sum needs at least one summand")
        dims = {dimension(s) for s in self.summands}
        if len(dims) > 1:
            raise MalformedExpr(f"connected sum of mixed dimensions {sorted(dims)}")
        if dims == {1}:
            raise MalformedExpr("connected sums of 1-manifolds are not allowed")


@dataclass(frozen=True)
class Product:
    """Direct product of at least two manifolds."""

    factors: tuple["ManifoldExpr", ...]

    def __post_init__(self) -> None:
        if len(self.factors) < 2:
            raise MalformedExpr("product needs at least two factors")


ManifoldExpr = Union[Circle, Surface, CircleBundle, ConnSum, Product]

CIRCLE = Circle()


def conn_sum(*summands: ManifoldExpr) -> ManifoldExpr:
    """Normalized connected sum of the given summands."""
    return normalize(ConnSum(tuple(summands)))


def product(*factors: ManifoldExpr) -> ManifoldExpr:
    """Normalized direct product of the given factors."""
    return normalize(Product(tuple(factors)))


def dimension(m: ManifoldExpr) -> int:
    if isinstance(m, Circle):
        return 1
    if isinstance(m, Surface):
        return 2
    if isinstance(m, CircleBundle):
        return 3
    if isinstance(m, ConnSum):
        return dimension(m.summands[0])
    if isinstance(m, Product):
        return sum(dimension(f) for f in m.factors)
    raise MalformedExpr(f"not a manifold expression: {m!r}")


def sort_key(m: ManifoldExpr) -> tuple:
    """A total order on expressions: variant rank, then fields, then children."""
    if isinstance(m, Circle):
        return (0, (), ())
    if isinstance(m, Surface):
        return (1, (m.genus,), ())
    if isinstance(m, CircleBundle):
        return (2, (m.base_genus, m.euler), ())
    if isinstance(m, ConnSum):
        return (3, (), tuple(sort_key(s) for s in m.summands))
    return (4, (), tuple(sort_key(f) for f in m.factors))


def normalize(m: ManifoldExpr) -> ManifoldExpr:
    """Canonical form: same-kind children flattened, children sorted,
    single-summand connected sums collapsed.  Idempotent, and preserves the
    multiset of leaves."""
    if isinstance(m, (Circle, Surface, CircleBundle)):
        return m
    if isinstance(m, ConnSum):
        flat: list[ManifoldExpr] = []
        for s in m.summands:
            s = normalize(s)
            if isinstance(s, ConnSum):
                flat.extend(s.summands)
            else:
                flat.append(s)
        if len(flat) == 1:
            return flat[0]
        return ConnSum(tuple(sorted(flat, key=sort_key)))
    if isinstance(m, Product):
        flat = []
        for f in m.factors:
            f = normalize(f)
            if isinstance(f, Product):
                flat.extend(f.factors)
            else:
                flat.append(f)
        return Product(tuple(sorted(flat, key=sort_key)))
    raise MalformedExpr(f"not a manifold expression: {m!r}")


def summand_multiset(m: ManifoldExpr) -> Counter:
    """The connected summands of a normalized expression, as a multiset.

    Non-sums count as a single summand of themselves.
    """
    if isinstance(m, ConnSum):
        return Counter(m.summands)
    return Counter({m: 1})


def is_pi2_trivial(n: ManifoldExpr) -> bool:
    """Whether the second homotopy group of this 3-manifold vanishes.

    True for circle bundles over hyperbolic surfaces (they are aspherical)
    and for one-summand connected sums; false for sums of two or more
    summands, whose connecting sphere is essential.
    """
    if dimension(n) != 3:
        raise UnsupportedExpression(f"pi_2 test needs a 3-manifold, got dimension {dimension(n)}")
    if isinstance(n, CircleBundle):
        return True
    if isinstance(n, ConnSum):
        if len(n.summands) == 1:
            return is_pi2_trivial(n.summands[0])
        return False
    raise UnsupportedExpression(f"pi_2 not determined for {type(n).__name__}")


def is_product_domination_free(n: ManifoldExpr) -> bool:
    """Whether this 3-manifold is known to admit no non-zero degree map
    from any direct product.

    True for circle bundles with non-zero Euler number, and for connected
    sums containing such a summand (a product dominating the sum would,
    after pinching, dominate the summand).  Everything else conservatively
    returns false, which is always sound for the callers.
    """
    if dimension(n) != 3:
        return False
    if isinstance(n, CircleBundle):
        return n.euler != 0
    if isinstance(n, ConnSum):
        return any(
            isinstance(s, CircleBundle) and s.euler != 0 for s in n.summands
        ) or any(
            isinstance(s, ConnSum) and is_product_domination_free(s) for s in n.summands
        )
    return False
