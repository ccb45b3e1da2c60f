#!/usr/bin/env python3
"""Supersingular-prime scans and the coprimality prime filter.

For the CM curve y^2 = x^3 - x the supersingular primes are exactly the
primes = 3 mod 4, density 1/2; a generic curve shows the sparse pattern."""

from isogeny_forge.checkers import global2_prime_filter, supersingular_scan
from isogeny_forge.elliptic import curve_from_pair

for (a, b) in [(1, -1), (1, 3), (2, 7)]:
    E = curve_from_pair(a, b)
    scan = supersingular_scan(E, 300)
    print(f"E({a},{b}): supersingular primes up to {scan.bound}:")
    print(f"  {list(scan.primes)}")
    print(f"  observed density {scan.density} over {scan.tested} good primes")
    print()

E = curve_from_pair(1, -1)
print("primes <= 60 coprime to 6 * N * deg(phi) for E(1,-1) (N = 32):")
for deg in (1, 2, 5):
    print(f"  deg(phi) = {deg}: {global2_prime_filter(E, deg, 60)}")
