"""Shared helpers: a seeded generator of random well-formed expressions."""

from __future__ import annotations

import random

from degreecalc.manifold import (
    CIRCLE,
    CircleBundle,
    ConnSum,
    ManifoldExpr,
    Product,
    Surface,
)


def random_expr(rng: random.Random, depth: int = 0) -> ManifoldExpr:
    """A random well-formed expression, biased toward atoms as depth grows."""
    roll = rng.random()
    if depth >= 2 or roll < 0.45:
        return _random_atom(rng)
    if roll < 0.75:
        return _random_conn_sum(rng, depth)
    return Product(tuple(random_expr(rng, depth + 1) for _ in range(rng.randint(2, 3))))


def _random_atom(rng: random.Random) -> ManifoldExpr:
    kind = rng.randrange(3)
    if kind == 0:
        return CIRCLE
    if kind == 1:
        return Surface(rng.randint(0, 4))
    return CircleBundle(rng.randint(2, 4), rng.randint(-9, 9))


def _random_dim3_piece(rng: random.Random) -> ManifoldExpr:
    if rng.random() < 0.8:
        return CircleBundle(rng.randint(2, 4), rng.randint(-9, 9))
    return Product((CIRCLE, Surface(rng.randint(0, 3))))


def _random_conn_sum(rng: random.Random, depth: int) -> ManifoldExpr:
    count = rng.randint(2, 4)
    if rng.random() < 0.4:
        summands: tuple[ManifoldExpr, ...] = tuple(
            Surface(rng.randint(0, 4)) for _ in range(count)
        )
    else:
        summands = tuple(_random_dim3_piece(rng) for _ in range(count))
    inner = list(summands)
    if depth == 0 and rng.random() < 0.3:
        # nest a same-dimension sum to exercise flattening
        inner.append(ConnSum(tuple(inner[:2])))
    return ConnSum(tuple(inner))
