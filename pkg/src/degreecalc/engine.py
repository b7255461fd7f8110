"""Degree-set computation for pairs of manifold expressions.

:func:`degree_bounds` returns a :class:`SetBound`: a realised lower set, an
upper set when one can be derived, and a trace of the rules used.  The lower
set only ever contains degrees backed by an explicit construction (constant
map, identity, coverings, pinch maps, sums and products of those); the upper
set only ever follows from restriction arguments (closed forms, pinching the
target, factor projections).  Exactness is not a flag but the coincidence of
the two, so the calculator cannot silently overclaim on pairs the rules do
not cover.

All functions are pure and deterministic; results on an expression pair and
on its normalized form are identical because inputs are normalized up front.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from . import intset
from .intset import ALL_INTEGERS, ZERO_ONLY, DegreeSet, UnrepresentableSet
from .manifold import (
    Circle,
    CircleBundle,
    ConnSum,
    ManifoldExpr,
    Product,
    Surface,
    UnsupportedExpression,
    dimension,
    is_pi2_trivial,
    is_product_domination_free,
    normalize,
    sort_key,
    summand_multiset,
)

ONE_ONLY = DegreeSet.finite((1,))


class DimensionMismatch(ValueError):
    """The two expressions do not have the same dimension."""


class NotDecided(Exception):
    """The calculator could not close the gap between lower and upper set."""

    def __init__(self, bound: "SetBound"):
        self.bound = bound
        upper = "unknown" if bound.upper is None else str(bound.upper)
        super().__init__(f"degree set not decided: lower {bound.lower}, upper {upper}")


class EngineInvariantError(AssertionError):
    """Internal soundness check failed (lower exceeded upper)."""


@dataclass(frozen=True)
class RuleApplication:
    """One rule firing: which rule, on what inputs, producing which degrees."""

    rule: str
    inputs: tuple[ManifoldExpr, ...]
    produced: DegreeSet
    details: tuple[tuple[str, object], ...] = ()

    def detail(self, key: str, default: object = None) -> object:
        for k, v in self.details:
            if k == key:
                return v
        return default


@dataclass(frozen=True)
class SetBound:
    """Bracket for a degree set: realised lower, derived upper, rule trace."""

    lower: DegreeSet
    upper: Optional[DegreeSet]
    trace: tuple[RuleApplication, ...] = field(default_factory=tuple)

    @property
    def exact(self) -> bool:
        return self.upper is not None and intset.equals(self.lower, self.upper)

    def exact_set(self) -> DegreeSet:
        if not self.exact:
            raise NotDecided(self)
        return self.lower


def _make_bound(
    lower: DegreeSet, upper: Optional[DegreeSet], trace: list[RuleApplication]
) -> SetBound:
    if lower.is_all:
        upper = ALL_INTEGERS
    if upper is not None and not upper.is_all:
        allowed = set(upper.elements)
        if lower.is_all or not all(x in allowed for x in lower.elements):
            raise EngineInvariantError(
                f"lower bound {lower} escapes upper bound {upper}"
            )
    return SetBound(lower, upper, _dedupe(trace))


def _dedupe(trace: list[RuleApplication]) -> tuple[RuleApplication, ...]:
    seen: set[RuleApplication] = set()
    out: list[RuleApplication] = []
    for entry in trace:
        if entry not in seen:
            seen.add(entry)
            out.append(entry)
    return tuple(out)


_CACHE: dict[tuple[ManifoldExpr, ManifoldExpr], SetBound] = {}
_CACHE_MAX = 4096


def clear_cache() -> None:
    _CACHE.clear()


def degree_bounds(m: ManifoldExpr, n: ManifoldExpr) -> SetBound:
    """Best known bracket for the set of mapping degrees from m to n."""
    m = normalize(m)
    n = normalize(n)
    if dimension(m) != dimension(n):
        raise DimensionMismatch(
            f"source has dimension {dimension(m)}, target {dimension(n)}"
        )
    return _bounds(m, n)


def degree_set_exact(m: ManifoldExpr, n: ManifoldExpr) -> DegreeSet:
    """The degree set when the bracket closes; raises NotDecided otherwise."""
    return degree_bounds(m, n).exact_set()


def _bounds(m: ManifoldExpr, n: ManifoldExpr) -> SetBound:
    key = (m, n)
    hit = _CACHE.get(key)
    if hit is not None:
        return hit
    result = _compute(m, n)
    if len(_CACHE) >= _CACHE_MAX:
        _CACHE.clear()
    _CACHE[key] = result
    return result


def _compute(m: ManifoldExpr, n: ManifoldExpr) -> SetBound:
    if isinstance(m, Circle) and isinstance(n, Circle):
        return _circle_pair(m, n)
    if isinstance(m, Surface) and isinstance(n, Surface):
        return _surface_pair(m, n)
    if isinstance(m, CircleBundle) and isinstance(n, CircleBundle):
        return _bundle_pair(m, n)
    if isinstance(n, ConnSum):
        return _target_conn_sum(m, n)
    if isinstance(m, ConnSum):
        return _source_conn_sum(m, n)
    if isinstance(m, Product) and isinstance(n, Product):
        return _product_pair(m, n)
    return _undetermined(m, n, "no rule applies to this pair of shapes")


# ---------------------------------------------------------------------------
# closed forms for the basic pairs


def _circle_pair(m: Circle, n: Circle) -> SetBound:
    entry = RuleApplication("circle_pair", (m, n), ALL_INTEGERS)
    return _make_bound(ALL_INTEGERS, ALL_INTEGERS, [entry])


def _surface_pair(m: Surface, n: Surface) -> SetBound:
    g, h = m.genus, n.genus
    if h == 0:
        result = ALL_INTEGERS
    elif h == 1:
        result = ALL_INTEGERS if g >= 1 else ZERO_ONLY
    elif g >= h:
        k = (g - 1) // (h - 1)
        result = intset.interval(-k, k)
    else:
        result = ZERO_ONLY
    entry = RuleApplication(
        "surface_pair", (m, n), result, (("source_genus", g), ("target_genus", h))
    )
    return _make_bound(result, result, [entry])


def _bundle_pair(m: CircleBundle, n: CircleBundle) -> SetBound:
    i, j = m.euler, n.euler
    if m.base_genus == n.base_genus and i != 0:
        if j % i == 0:
            result = DegreeSet.finite((0, j // i))
            details = (("euler_source", i), ("euler_target", j), ("quotient", j // i))
        else:
            result = ZERO_ONLY
            details = (("euler_source", i), ("euler_target", j))
        entry = RuleApplication("circle_bundle_pair", (m, n), result, details)
        return _make_bound(result, result, [entry])
    if m.base_genus != n.base_genus:
        reason = "circle bundles over different base surfaces"
    else:
        reason = "source bundle has Euler number 0"
    return _undetermined(m, n, reason)


def _undetermined(m: ManifoldExpr, n: ManifoldExpr, reason: str) -> SetBound:
    trace = [RuleApplication("constant_map", (m, n), ZERO_ONLY)]
    lower = ZERO_ONLY
    if m == n:
        trace.append(RuleApplication("identity_map", (m, n), ONE_ONLY))
        lower = intset.union(lower, ONE_ONLY)
    trace.append(
        RuleApplication("undetermined", (m, n), lower, (("reason", reason),))
    )
    return _make_bound(lower, None, trace)


# ---------------------------------------------------------------------------
# connected sums in the source: degree sets add


def _pi2_trivial_or_none(n: ManifoldExpr) -> Optional[bool]:
    try:
        return is_pi2_trivial(n)
    except UnsupportedExpression:
        return None


def _n_fold_sum(elems: tuple[int, ...], count: int) -> set[int]:
    """The count-fold iterated sumset of a finite element tuple."""
    if len(elems) == 2 and 0 in elems:
        # n copies of {0, d} add up to the progression {0, d, ..., n*d}
        d = elems[0] or elems[1]
        return {i * d for i in range(count + 1)}
    acc = {0}
    for _ in range(count):
        acc = {x + y for x in acc for y in elems}
    return acc


def _fold_sumsets(parts: list[DegreeSet]) -> DegreeSet:
    if any(p.is_empty for p in parts):
        return intset.EMPTY
    if any(p.is_all for p in parts):
        return ALL_INTEGERS
    acc = {0}
    for elems, count in Counter(p.elements for p in parts).items():
        block = _n_fold_sum(elems, count)
        acc = {x + y for x in acc for y in block}
    return DegreeSet.finite(acc)


def _source_conn_sum(m: ConnSum, n: ManifoldExpr) -> SetBound:
    children = [_bounds(s, n) for s in m.summands]
    trace: list[RuleApplication] = []
    for child in children:
        trace.extend(child.trace)

    lower = _fold_sumsets([c.lower for c in children])
    pi2 = _pi2_trivial_or_none(n)
    upper: Optional[DegreeSet] = None
    if pi2 and all(c.upper is not None for c in children):
        upper = _fold_sumsets([c.upper for c in children])
    entry = RuleApplication(
        "connected_sum_source_sum",
        (m, n),
        lower,
        (
            ("summand_count", len(m.summands)),
            ("pi2_trivial_target", bool(pi2)),
            ("exact", upper is not None and intset.equals(lower, upper)),
        ),
    )
    trace.append(entry)
    return _make_bound(lower, upper, trace)


# ---------------------------------------------------------------------------
# connected sums in the target: pinch upper bounds, covering lower bounds


def _positive_divisors(j: int) -> list[int]:
    j = abs(j)
    small, large = [], []
    d = 1
    while d * d <= j:
        if j % d == 0:
            small.append(d)
            if d != j // d:
                large.append(j // d)
        d += 1
    return small + large[::-1]


def _counter_fits(c: Counter, capacity: Counter) -> bool:
    return all(capacity.get(k, 0) >= v for k, v in c.items())


def _counter_key(c: Counter) -> tuple:
    return tuple(sorted(((sort_key(e), cnt) for e, cnt in c.items())))


def _achievable_sums(
    constructions: list[tuple[int, Counter]], capacity: Counter, budget: int = 20000
) -> set[int]:
    """All degree totals from packing constructions disjointly into capacity.

    Constructions may repeat as long as their carriers still fit.  The
    traversal order is fixed, so the budget cuts a deterministic prefix.
    """
    sums: set[int] = set()
    nodes = [budget]

    def rec(idx: int, remaining: Counter, acc: int) -> None:
        if nodes[0] <= 0:
            return
        nodes[0] -= 1
        sums.add(acc)
        for t in range(idx, len(constructions)):
            d, carrier = constructions[t]
            if _counter_fits(carrier, remaining):
                rest = remaining.copy()
                rest.subtract(carrier)
                rec(t, rest, acc + d)

    rec(0, capacity, 0)
    return sums


def _target_conn_sum(m: ManifoldExpr, n: ConnSum) -> SetBound:
    trace: list[RuleApplication] = []

    # Upper bound: a map onto the sum composes with the pinch onto each
    # summand, so the degree set embeds in every summand's degree set.
    summand_uppers: list[tuple[ManifoldExpr, object]] = []
    upper: Optional[DegreeSet] = None
    seen: set[ManifoldExpr] = set()
    for t in n.summands:
        if t in seen:
            continue
        seen.add(t)
        child = _bounds(m, t)
        trace.extend(child.trace)
        summand_uppers.append((t, child.upper if child.upper is not None else "unknown"))
        if child.upper is not None:
            upper = child.upper if upper is None else intset.intersect(upper, child.upper)
    if upper is not None:
        trace.append(
            RuleApplication(
                "target_summand_intersection",
                (m, n),
                upper,
                (("summand_uppers", tuple(summand_uppers)),),
            )
        )

    # Lower bound constructions, each consuming a sub-multiset of m's summands.
    s_m = summand_multiset(m)
    s_n = summand_multiset(n)
    total_m = sum(s_m.values())
    constructions: dict[tuple, tuple[int, Counter, RuleApplication]] = {}

    if _counter_fits(s_n, s_m):
        entry = RuleApplication(
            "pinch_to_submanifold", (m, n), ONE_ONLY, (("degree", 1),)
        )
        constructions[(1, _counter_key(s_n))] = (1, s_n, entry)

    for bundle in sorted(set(n.summands), key=sort_key):
        if not isinstance(bundle, CircleBundle):
            continue
        rest = s_n.copy()
        rest[bundle] -= 1
        rest = +rest
        total_rest = sum(rest.values())
        j = bundle.euler
        if j != 0:
            candidates = _positive_divisors(j)
        elif total_rest > 0:
            candidates = list(range(1, (total_m - 1) // total_rest + 1))
        else:
            candidates = []
        for d in candidates:
            cover = CircleBundle(bundle.base_genus, j // d)
            carrier = Counter({k: v * d for k, v in rest.items()})
            carrier[cover] += 1
            if not _counter_fits(carrier, s_m):
                continue
            key = (d, _counter_key(carrier))
            if key in constructions:
                continue
            entry = RuleApplication(
                "fiberwise_covering_lift",
                (m, n),
                DegreeSet.finite((d,)),
                (
                    ("degree", d),
                    ("target_bundle", bundle),
                    ("cover_bundle", cover),
                    ("copies_of_remaining_summands", d),
                ),
            )
            constructions[key] = (d, carrier, entry)

    ordered = [constructions[k] for k in sorted(constructions)]
    trace.append(RuleApplication("constant_map", (m, n), ZERO_ONLY))
    for _, _, entry in ordered:
        trace.append(entry)

    sums = _achievable_sums([(d, carrier) for d, carrier, _ in ordered], s_m)
    lower = DegreeSet.finite(sums | {0})
    single = {0} | {d for d, _, _ in ordered}
    if not sums <= single:
        trace.append(
            RuleApplication(
                "disjoint_sum_of_constructions",
                (m, n),
                lower,
                (("component_degrees", tuple(sorted(d for d, _, _ in ordered))),),
            )
        )
    return _make_bound(lower, upper, trace)


# ---------------------------------------------------------------------------
# products: degree sets multiply, with exactness under side conditions


def _fold_product_sets(parts: list[DegreeSet]) -> DegreeSet:
    acc = ONE_ONLY
    for p in parts:
        acc = intset.product_set(acc, p)
    return acc


def _clamped(p: DegreeSet) -> DegreeSet:
    return DegreeSet.finite((-1, 0, 1)) if p.is_all else p


def _bundle_summands(n: ManifoldExpr) -> list[CircleBundle]:
    if isinstance(n, CircleBundle):
        return [n]
    if isinstance(n, ConnSum):
        return [s for s in n.summands if isinstance(s, CircleBundle)]
    return []


def _kill_summand(source: ManifoldExpr, target: ManifoldExpr) -> Optional[CircleBundle]:
    """A circle-bundle summand of the target whose degree set from the
    source is exactly {0}: this forces maps from the source into the
    target factor to be homologically trivial in top degree."""
    for k in _bundle_summands(target):
        b = _bounds(source, k)
        if b.upper is not None and intset.equals(b.upper, ZERO_ONLY):
            return k
    return None


def _chain_search(
    pairs: list[tuple[ManifoldExpr, ManifoldExpr]]
) -> Optional[tuple[list[int], list[tuple[ManifoldExpr, CircleBundle]]]]:
    """Find an evaluation order in which every later target factor both
    resists product domination and kills the accumulated source factors."""

    kills: list[tuple[ManifoldExpr, CircleBundle]] = []

    def admissible(placed: list[int], candidate: int) -> Optional[list]:
        if not placed:
            return []
        _, n_c = pairs[candidate]
        if not is_product_domination_free(n_c):
            return None
        found = []
        for p in placed:
            q = pairs[p][0]
            k = _kill_summand(q, n_c)
            if k is None:
                return None
            found.append((q, k))
        return found

    def rec(placed: list[int], remaining: list[int]) -> Optional[list[int]]:
        if not remaining:
            return placed
        for idx, candidate in enumerate(remaining):
            step_kills = admissible(placed, candidate)
            if step_kills is None:
                continue
            result = rec(placed + [candidate], remaining[:idx] + remaining[idx + 1 :])
            if result is not None:
                kills.extend(step_kills)
                return result
        return None

    order = rec([], list(range(len(pairs))))
    if order is None:
        return None
    return order, kills


def _pairings(
    mf: tuple[ManifoldExpr, ...], nf: tuple[ManifoldExpr, ...]
) -> list[list[tuple[ManifoldExpr, ManifoldExpr]]]:
    from itertools import permutations

    mdims = [dimension(f) for f in mf]
    out: list[list[tuple[ManifoldExpr, ManifoldExpr]]] = []
    seen: set[tuple] = set()
    if len(mf) > 6:
        perms = [tuple(range(len(nf)))]
    else:
        perms = permutations(range(len(nf)))
    for perm in perms:
        if any(mdims[i] != dimension(nf[p]) for i, p in enumerate(perm)):
            continue
        pairing = [(mf[i], nf[p]) for i, p in enumerate(perm)]
        key = tuple(pairing)
        if key in seen:
            continue
        seen.add(key)
        out.append(pairing)
    return out


def _product_pair(m: Product, n: Product) -> SetBound:
    mf, nf = m.factors, n.factors
    if len(mf) != len(nf):
        return _undetermined(m, n, "products with different factor counts")
    pairings = _pairings(mf, nf)
    if not pairings:
        return _undetermined(m, n, "no dimension-compatible factor pairing")

    trace: list[RuleApplication] = []
    positional = [(a, b) for a, b in zip(mf, nf)]
    lower_pairing = positional if positional in pairings else pairings[0]
    children = [_bounds(a, b) for a, b in lower_pairing]
    for child in children:
        trace.extend(child.trace)
    try:
        lower = _fold_product_sets([c.lower for c in children])
        clamped = False
    except UnrepresentableSet:
        lower = _fold_product_sets([_clamped(c.lower) for c in children])
        clamped = True
    trace.append(
        RuleApplication(
            "product_of_factor_degrees",
            (m, n),
            lower,
            (
                ("pairing", tuple(lower_pairing)),
                ("lower_truncated_to_units", clamped),
            ),
        )
    )
    if lower.is_all:
        return _make_bound(lower, ALL_INTEGERS, trace)

    if all(dimension(f) == 3 for f in mf):
        for pairing in pairings:
            children = [_bounds(a, b) for a, b in pairing]
            if not all(c.exact for c in children):
                continue
            found = _chain_search(pairing)
            if found is None:
                continue
            order, kills = found
            for child in children:
                trace.extend(child.trace)
            exact = _fold_product_sets([c.lower for c in children])
            if not lower.is_all and not exact.is_all:
                if not set(lower.elements) <= set(exact.elements):
                    raise EngineInvariantError(
                        f"factor pairing disagreement: realised {lower} "
                        f"outside decided {exact}"
                    )
            trace.append(
                RuleApplication(
                    "product_exactness_chain",
                    (m, n),
                    exact,
                    (
                        ("order", tuple(pairing[i] for i in order)),
                        ("kills", tuple(kills)),
                    ),
                )
            )
            return _make_bound(exact, exact, trace)

    return _make_bound(lower, None, trace)


# ---------------------------------------------------------------------------
# serialization


def _jsonable_value(v: object) -> object:
    from .dsl import print_expr

    if isinstance(v, DegreeSet):
        return intset.to_jsonable(v)
    if isinstance(v, (Circle, Surface, CircleBundle, ConnSum, Product)):
        return print_expr(v)
    if isinstance(v, (tuple, list)):
        return [_jsonable_value(x) for x in v]
    return v


def trace_to_jsonable(trace: tuple[RuleApplication, ...]) -> list[dict]:
    from .dsl import print_expr

    return [
        {
            "rule": e.rule,
            "inputs": [print_expr(x) for x in e.inputs],
            "produced": intset.to_jsonable(e.produced),
            "details": {k: _jsonable_value(v) for k, v in e.details},
        }
        for e in trace
    ]


def bound_to_jsonable(bound: SetBound) -> dict:
    return {
        "lower": intset.to_jsonable(bound.lower),
        "upper": None if bound.upper is None else intset.to_jsonable(bound.upper),
        "exact": bound.exact,
        "trace": trace_to_jsonable(bound.trace),
    }
