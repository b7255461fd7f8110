"""Realising prescribed sets of integers as degree sets.

Three families of targets are constructible on demand, each returning a
certificate with the manifolds, the parameters, and the derivation:

* arbitrary windows of multiples (the sumset family),
* arithmetic sequences of integer intervals containing 0,
* all subset sums of a finite list.
"""

from degreecalc import (
    ArithIntervals,
    SubsetSums,
    SumsetFamily,
    print_expr,
    realise_arith_intervals,
    realise_subset_sums,
    realise_sumset,
)
from degreecalc.verify import check_certificate

print("== sumset family ==")
cert = realise_sumset(SumsetFamily(d=(1, 3), n=(0, 2), nprime=(0, 1)))
print(f"target {cert.target}")
print(f"  M = {print_expr(cert.m)}")
print(f"  N = {print_expr(cert.n)}")
print(f"  params: d' = {cert.params['d_prime']}, d'_i = {cert.params['d_i_prime']}")

print()
print("== arithmetic progression {-3, 0, 3, 6} as intervals ==")
cert = realise_arith_intervals(ArithIntervals(((-3, -3), (0, 0), (3, 3), (6, 6))))
keys = ("n1", "n1prime", "d2", "n2", "n2prime")
print(f"target {cert.target}, derived parameters {[cert.params[k] for k in keys]}")

print()
print("== interval sequence {[-2,-1], [0,1], [2,3]} ==")
cert = realise_arith_intervals(ArithIntervals(((-2, -1), (0, 1), (2, 3))))
print(f"target {cert.target}")
print(f"  M = {print_expr(cert.m)}")
print(f"  N = {print_expr(cert.n)}")

print()
print("== subset sums of (-2, 3) ==")
cert = realise_subset_sums(SubsetSums((-2, 3)))
print(f"target {cert.target}")
print(f"  M = {print_expr(cert.m)}")

print()
print("Each certificate re-verifies against the calculator and the oracle:")
report = check_certificate(cert)
print(report.to_text())
