"""Integer-set algebra warm-up.

Degree sets are plain sets of integers (or all of Z), and the calculator
manipulates them with exact Minkowski sums, product sets and lattice
operations.  This script walks through the operations on small examples.
"""

from degreecalc import (
    ALL_INTEGERS,
    DegreeSet,
    interval,
    intersect,
    negate,
    product_set,
    sumset,
    union,
)

fin = DegreeSet.finite

print("== sums ==")
a, b = fin([0, 2]), fin([0, 3])
print(f"{a} + {b} = {sumset(a, b)}")
print(f"{a} + {{0}} = {sumset(a, fin([0]))}   (zero is the identity)")
print(f"Z + {b} = {sumset(ALL_INTEGERS, b)}   (all of Z absorbs)")

print()
print("== products ==")
c, d = fin([0, 1, 2]), fin([0, 1, 3])
print(f"{c} * {d} = {product_set(c, d)}")
print(f"{c} * {{1}} = {product_set(c, fin([1]))}   (one is the identity)")
print(f"Z * {{0}} = {product_set(ALL_INTEGERS, fin([0]))}  (zero annihilates)")

print()
print("== lattice operations ==")
print(f"[0,4] = {interval(0, 4)}")
print(f"[0,4] meet {{0,1,4,5}} = {intersect(interval(0, 4), fin([0, 1, 4, 5]))}")
print(f"-{fin([0, 3])} = {negate(fin([0, 3]))}")
print(f"{a} join {b} = {union(a, b)}")

print()
print("The sets serialize to JSON for certificates:")
from degreecalc import intset

print(f"  {intset.to_jsonable(fin([0, 3]))}")
print(f"  {intset.to_jsonable(ALL_INTEGERS)}")
