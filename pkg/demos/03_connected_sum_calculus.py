"""Connected sums on both sides of the map.

Source side: degrees add over the summands, and the sum rule is exact when
the target has no essential 2-sphere (for us: a circle bundle over a
hyperbolic surface).

Target side: pinching the target onto each summand gives an upper bound by
intersection, while explicit pinch maps and fiberwise coverings realise a
lower bound.  When the two meet, the set is decided: the block below is the
{0, 1, d} workhorse used by the subset-product realisations.
"""

from degreecalc import degree_bounds, degree_set_exact, parse_expr

print("== source sums: degrees add ==")
m = parse_expr("K(2;1) # K(2;1) # K(2;-1)")
n = parse_expr("K(2;3)")
print(f"D({'K(2;1) # K(2;1) # K(2;-1)'}, K(2;3)) = {degree_set_exact(m, n)}")
print("  each K(2;1) contributes {0, 3}, the K(2;-1) contributes {0, -3}")

print()
print("== target sums: the {0, 1, d} block for d = 2 ==")
q = parse_expr("K(2;3) # K(2;3) # K(2;2) # K(2;4)")
p = parse_expr("K(2;3) # K(2;4)")
bound = degree_bounds(q, p)
print(f"D(Q, P) = {bound.lower}  (exact: {bound.exact})")
print("derivation:")
for entry in bound.trace:
    detail = ""
    if entry.rule == "fiberwise_covering_lift":
        detail = f"  [degree {entry.detail('degree')} cover through {entry.detail('cover_bundle')}]"
    print(f"  {entry.rule}: {entry.produced}{detail}")

print()
print("Upper bound detail: D(Q, K(2;3)) and D(Q, K(2;4)) intersect to {0, 1, 2}:")
print(f"  D(Q, K(2;3)) = {degree_set_exact(q, parse_expr('K(2;3)'))}")
print(f"  D(Q, K(2;4)) = {degree_set_exact(q, parse_expr('K(2;4)'))}")

print()
print("== disjoint constructions add ==")
m = parse_expr("K(2;1) # K(2;1) # K(2;2) # K(2;2)")
n = parse_expr("K(2;1) # K(2;2)")
bound = degree_bounds(m, n)
print(f"D(N # N, N) for N = K(2;1) # K(2;2): {bound.lower} (exact: {bound.exact})")
print("  two copies of the target sit disjointly in the source, so 1 + 1 = 2")
