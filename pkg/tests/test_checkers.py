import random

import pytest

from isogeny_forge.checkers import (
    MAIN2_CONCLUSION_UNRAMIFIED,
    SupersingularScan,
    global2_prime_filter,
    main1_check,
    main2_check,
    supersingular_scan,
)
from isogeny_forge.elliptic import ap_trace, curve_from_pair
from isogeny_forge.exactnum import primes_up_to

E1M1 = curve_from_pair(1, -1)
E13 = curve_from_pair(1, 3)


def test_main1_singleton_always_met_for_odd_p():
    for p in [3, 5, 7, 11, 13]:
        v = main1_check([E1M1], p)
        assert v.met
        assert v.conclusion is not None


def test_main1_two_supersingular_factors():
    v = main1_check([E1M1, E1M1], 7)
    assert not v.met
    assert "2 supersingular" in v.reason
    assert v.conclusion is None


def test_main1_even_prime():
    v = main1_check([E1M1, E13], 2)
    assert not v.met
    assert "odd" in v.reason


def test_main1_mixed_factors_ok():
    v = main1_check([E1M1, E13], 7)
    assert v.met


def test_main1_order_independent():
    a = main1_check([E1M1, E13, curve_from_pair(2, 5)], 7)
    b = main1_check([curve_from_pair(2, 5), E13, E1M1], 7)
    assert a.met == b.met


def test_main2_degree_not_coprime():
    v = main2_check([(([E13]), 3)], 3)
    assert not v.met
    assert "not coprime" in v.reason


def test_main2_upgrade_to_p_divisible():
    # both factors ordinary and genuinely good at 5
    v = main2_check([([E1M1], 1), ([E13], 2)], 5, unramified=True, all_good=True)
    assert v.met
    assert v.conclusion == MAIN2_CONCLUSION_UNRAMIFIED


def test_main2_all_good_flag_is_verified():
    E = curve_from_pair(1, 11)  # multiplicative at 11
    v = main2_check([([E], 1)], 11, unramified=True, all_good=True)
    assert not v.met
    assert "all-good" in v.reason


def test_main2_two_supersingular_products():
    v = main2_check([([E1M1], 1), ([E1M1], 1)], 7)
    assert not v.met
    v2 = main2_check([([E1M1, E13], 1), ([E13], 1)], 7)
    assert v2.met


def test_global2_example():
    assert global2_prime_filter(E1M1, 2, 20) == [5, 7, 11, 13, 17, 19]
    assert global2_prime_filter(E1M1, 2, 2) == []
    assert global2_prime_filter(E1M1, 5, 20) == [7, 11, 13, 17, 19]


def test_global2_invalid_degree():
    with pytest.raises(ValueError):
        global2_prime_filter(E1M1, 0, 20)


def test_global2_against_set_oracle():
    rng = random.Random(12)
    from isogeny_forge.reduction import conductor

    done = 0
    while done < 50:
        a, b = rng.randint(-9, 9), rng.randint(-9, 9)
        if not (a and b and a != b):
            continue
        E = curve_from_pair(a, b)
        d = rng.randint(1, 6)
        bound = rng.randint(2, 60)
        got = set(global2_prime_filter(E, d, bound))
        modulus = 6 * conductor(E) * d
        want = {p for p in primes_up_to(bound) if modulus % p != 0}
        assert got == want
        done += 1


def test_supersingular_scan_cm_curve():
    scan = supersingular_scan(E1M1, 50)
    assert list(scan.primes) == [3, 7, 11, 19, 23, 31, 43, 47]
    assert supersingular_scan(E1M1, 2).primes == ()


def test_supersingular_scan_cm_pattern_up_to_200():
    scan = supersingular_scan(E1M1, 200)
    want = [p for p in primes_up_to(200) if p % 4 == 3]
    assert list(scan.primes) == want
    assert 0 < scan.density < 1


def test_supersingular_scan_matches_exhaustive_ap():
    E = E13
    scan = supersingular_scan(E, 100)
    want = []
    for p in primes_up_to(100):
        if p == 2 or E.delta % p == 0:
            continue
        if ap_trace(E, p) % p == 0:
            want.append(p)
    assert list(scan.primes) == want


def test_scan_works_on_nonminimal_model():
    # good primes hidden behind a non-minimal model are still scanned
    from fractions import Fraction

    blown = E1M1.model.transform(Fraction(1, 3), 0, 0, 0)  # y^2 = x^3 - 81x
    assert int(blown.disc) % 3 == 0
    scan = supersingular_scan(blown, 50)
    assert list(scan.primes) == [3, 7, 11, 19, 23, 31, 43, 47]
