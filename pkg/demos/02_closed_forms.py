"""The three closed forms: circles, surfaces, circle bundles.

Maps between circles take every degree.  Maps between surfaces are pinned
down by the genus: spherical and toral targets take every degree (once the
source genus suffices), hyperbolic targets cap the degree at
floor((g-1)/(h-1)).  Between circle bundles over the same hyperbolic
surface, the Euler numbers decide everything: a non-zero degree forces a
fiberwise covering, and the degree must be the Euler-number quotient.
"""

from degreecalc import degree_bounds, degree_set_exact, parse_expr

print("== circles ==")
print(f"D(S1, S1) = {degree_set_exact(parse_expr('S1'), parse_expr('S1'))}")

print()
print("== surfaces ==")
for g, h in [(2, 0), (3, 1), (3, 2), (5, 2), (2, 5)]:
    result = degree_set_exact(parse_expr(f"S({g})"), parse_expr(f"S({h})"))
    print(f"D(S({g}), S({h})) = {result}")

print()
print("== circle bundles over the genus-2 surface ==")
for i, j in [(2, 6), (2, 3), (-2, 6), (1, 7), (5, 5)]:
    result = degree_set_exact(parse_expr(f"K(2;{i})"), parse_expr(f"K(2;{j})"))
    print(f"D(K(2;{i}), K(2;{j})) = {result}")

print()
print("A divisible pair in full, with the rule trace:")
bound = degree_bounds(parse_expr("K(2;2)"), parse_expr("K(2;6)"))
print(f"exact: {bound.exact}, set: {bound.lower}")
for entry in bound.trace:
    print(f"  rule {entry.rule}: produced {entry.produced}")

print()
print("Pairs outside the closed forms stay honest -- bounds only:")
bound = degree_bounds(parse_expr("K(2;0)"), parse_expr("K(2;5)"))
print(f"lower {bound.lower}, upper {'unknown' if bound.upper is None else bound.upper}")
