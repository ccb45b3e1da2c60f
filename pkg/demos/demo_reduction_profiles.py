#!/usr/bin/env python3
"""Reduction-type profile of an elliptic curve: Kodaira types at bad primes,
conductor, and potential types at a few odd primes."""

from isogeny_forge.elliptic import curve_from_pair
from isogeny_forge.exactnum import factorize
from isogeny_forge.reduction import classify_reduction, conductor

for (a, b) in [(1, -1), (1, 11), (3, -5)]:
    E = curve_from_pair(a, b)
    N = conductor(E)
    print(f"E({a},{b}): y^2 = x(x-{a})(x-{b}),  Delta = {E.delta},  N = {N}")
    for p in sorted(factorize(E.delta)):
        rep = classify_reduction(E, p)
        line = (
            f"  p={p:3d}  {rep.kodaira_type:>5}  f={rep.conductor_exponent}"
            f"  v(Dmin)={rep.v_delta_min}  {rep.actual_type}"
        )
        if rep.potential_type:
            line += f"  (potentially {rep.potential_type[3:]})"
        print(line)
    for p in (5, 7, 13):
        rep = classify_reduction(E, p)
        if rep.conductor_exponent == 0:
            print(f"  p={p:3d}  good, {rep.actual_type}")
    print()
