#!/usr/bin/env python3
"""Augmentation-filtration quotients I^r / I^(r+1) of group rings, including
the group ring of an elliptic point group."""

from isogeny_forge.elliptic import curve_from_pair, rational_points_mod_p
from isogeny_forge.pontryagin import FinAbGroup, aug_filtration

groups = [
    FinAbGroup.cyclic(2),
    FinAbGroup.cyclic(3),
    FinAbGroup.cyclic(8),
    FinAbGroup.from_invariant_factors([2, 4]),
    FinAbGroup.from_elliptic(rational_points_mod_p(curve_from_pair(1, -1), 5)),
    FinAbGroup.from_elliptic(rational_points_mod_p(curve_from_pair(1, -1), 11)),
]

for G in groups:
    rep = aug_filtration(G, 4)
    print(f"{G.label} (invariants {G.nontrivial_invariants()}):")
    for r, fs in rep.quotients:
        print(f"  I^{r}/I^{r + 1} = {' x '.join(f'Z/{f}' for f in fs) or 'trivial'}")
    print(f"  first quotient recovers the group: {rep.exactness_ok}")
    if rep.stabilization:
        print(f"  factors repeat from r = {rep.stabilization}")
    print()
