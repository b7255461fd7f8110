"""Subset products via manifold products, and independent verification.

The geometric family realises {0, 1} together with all subset products of
a non-decreasing list: one {0, 1, d} block per value, with distinct primes
keeping the blocks from interfering, multiplied together.  The verifier
re-derives everything from scratch and pinpoints any tampering.
"""

import json

from degreecalc import Geometric, print_expr, realise_geometric
from degreecalc.realiser import certificate_from_json, certificate_to_json
from degreecalc.verify import check_certificate

print("== subset products of (2, 3) ==")
cert = realise_geometric(Geometric((2, 3)))
print(f"target {cert.target}")
print(f"  M = {print_expr(cert.m)}")
print(f"  N = {print_expr(cert.n)}")
print(f"  primes: {cert.params['q']}")

print()
print("== geometric progression {0, 1, 3, 9, 27} ==")
cert = realise_geometric(Geometric((3, 3, 3)))
print(f"target {cert.target}, primes {cert.params['q']}")

print()
print("== verification ==")
report = check_certificate(cert)
print(report.to_text())

print()
print("== tampering is caught ==")
payload = json.loads(certificate_to_json(cert))
payload["params"]["q"][0] = 2  # not admissible: must exceed every d
tampered = certificate_from_json(json.dumps(payload))
report = check_certificate(tampered)
print(report.to_text())
