#!/usr/bin/env python3
"""Grid search for smooth split-Jacobian curves, deduplicated by geometric
isomorphism class and filtered by a hypothesis predicate."""

from isogeny_forge.checkers import main1_check
from isogeny_forge.scholten import box_grid, good_primes_for, parameter_search, verify_split_jacobian

P = 7


def at_most_one_supersingular(C):
    return main1_check([C.e1, C.e2], P).met


def certified_split(C):
    usable = good_primes_for(C, 50)
    return len(usable) >= 5 and verify_split_jacobian(C, usable).verdict


predicates = [
    (f"max-one-supersingular@{P}", at_most_one_supersingular),
    ("split-jacobian@50", certified_split),
]

print(f"searching |a|,|b|,|c|,|d| <= 3 with predicates {[n for n, _ in predicates]}")
count = 0
for rec in parameter_search(box_grid(3), predicates):
    count += 1
    if count <= 12:
        C = rec.curve
        print(f"  {C.params}: lam={C.lam}, sextic={C.curve.coeffs}")
print(f"{count} isomorphism classes found")
