import random
from fractions import Fraction

import pytest

from isogeny_forge.elliptic import TwoTorsionCurve, WeierstrassModel, curve_from_pair, is_supersingular_at
from isogeny_forge.errors import DegenerateCurveError, UnsupportedPrimeError
from isogeny_forge.exactnum import factorize, primes_up_to
from isogeny_forge.reduction import (
    ADDITIVE,
    GOOD_ORDINARY,
    GOOD_SUPERSINGULAR,
    NONSPLIT_MULTIPLICATIVE,
    POT_GOOD_ORDINARY,
    POT_GOOD_SUPERSINGULAR,
    POT_MULTIPLICATIVE,
    SPLIT_MULTIPLICATIVE,
    classify_reduction,
    conductor,
    minimal_model_at,
    potential_type,
    tate_algorithm,
)

X3_MINUS_X = curve_from_pair(1, -1)


def W(*coeffs):
    return WeierstrassModel.from_coeffs(*coeffs)


def _vp(n, p):
    v = 0
    while n and n % p == 0:
        n //= p
        v += 1
    return v


# Anchor curves with known conductors (classic small-conductor curves).
ANCHORS = [
    (W(0, -1, 1, -10, -20), 11),   # X_0(11)
    (W(0, -1, 1, 0, 0), 11),       # y^2 + y = x^3 - x^2
    (W(0, 0, 1, -1, 0), 37),
    (W(0, 1, 1, -2, 0), 389),
    (W(0, 0, 0, -1, 0), 32),       # y^2 = x^3 - x
    (W(0, 0, 0, 4, 0), 32),
    (W(0, 0, 0, 1, 0), 64),        # y^2 = x^3 + x
    (W(0, 0, 0, 0, 1), 36),        # y^2 = x^3 + 1
    (W(0, 0, 1, 0, 0), 27),        # y^2 + y = x^3
    (W(1, 1, 1, -10, -10), 15),
    (W(1, 0, 1, 4, -6), 14),
    (W(1, -1, 0, -2, -1), 49),
    (W(0, -1, 0, -4, 4), 24),
    (W(0, 1, 0, 4, 4), 20),
    (W(1, -1, 0, 0, -5), 45),
]


def test_conductor_anchors():
    for model, N in ANCHORS:
        assert conductor(model) == N, f"conductor of {model} should be {N}"


def test_conductor_of_x3_minus_x_is_32():
    assert conductor(X3_MINUS_X) == 32


def test_wild_exponents():
    out2 = tate_algorithm(W(0, 0, 0, -1, 0), 2)
    assert out2.kodaira_type == "III"
    assert out2.v_delta_min == 6
    assert out2.conductor_exponent == 5

    out3 = tate_algorithm(W(0, 0, 1, 0, 0), 3)
    assert out3.kodaira_type == "II"
    assert out3.v_delta_min == 3
    assert out3.conductor_exponent == 3

    out = tate_algorithm(W(0, 0, 0, 1, 0), 2)
    assert out.kodaira_type == "II"
    assert out.conductor_exponent == 6

    # v(Delta) = 12 but the model is still 2-minimal
    out = tate_algorithm(W(0, 0, 0, 4, 0), 2)
    assert out.kodaira_type == "I3*"
    assert out.v_delta_min == 12
    assert out.conductor_exponent == 5


def test_wild_starred_types_pinned_by_component_counts():
    # conductor 24, v2(Delta_min) = 8, f2 = 3 leaves 6 components: only I1*
    out = tate_algorithm(W(0, -1, 0, -4, 4), 2)
    assert (out.kodaira_type, out.v_delta_min, out.conductor_exponent) == ("I1*", 8, 3)
    # conductor 20, v2(Delta_min) = 8, f2 = 2 leaves 7 components: only IV*
    out = tate_algorithm(W(0, 1, 0, 4, 4), 2)
    assert (out.kodaira_type, out.v_delta_min, out.conductor_exponent) == ("IV*", 8, 2)
    # conductor 45, v3(Delta_min) = 7, f3 = 2 leaves 6 components: only I1*
    out = tate_algorithm(W(1, -1, 0, 0, -5), 3)
    assert (out.kodaira_type, out.v_delta_min, out.conductor_exponent) == ("I1*", 7, 2)


def test_all_additive_types_against_tame_oracle():
    # engineered short models y^2 = x^3 + Ax + B hitting every additive type,
    # classified by the machine and by the independent valuation table
    for p in (5, 7, 13):
        cases = {
            "II": (p, p),
            "III": (p, p * p),
            "IV": (p * p, p * p),
            "I0*": (p * p, p**3),
            "IV*": (p**3, p**4),
            "III*": (p**3, p**5),
            "II*": (p**4, p**5),
        }
        for m in range(1, 7):
            cases[f"I{m}*"] = (-3 * p * p, (2 + p**m) * p**3)
        for expected, (A, B) in cases.items():
            model = W(0, 0, 0, A, B)
            typ, f = tame_oracle(model, p)
            assert typ == expected, (p, expected, typ)
            out = tate_algorithm(model, p)
            assert (out.kodaira_type, out.conductor_exponent) == (typ, f), (p, expected)


def test_good_prime_report():
    rep = classify_reduction(X3_MINUS_X, 5)
    assert rep.kodaira_type == "I0"
    assert rep.conductor_exponent == 0
    assert rep.v_delta_min == 0
    assert rep.actual_type == GOOD_ORDINARY
    rep7 = classify_reduction(X3_MINUS_X, 7)
    assert rep7.actual_type == GOOD_SUPERSINGULAR


def test_multiplicative_example_e_1_11():
    E = curve_from_pair(1, 11)
    rep = classify_reduction(E, 11)
    assert rep.kodaira_type == "I2"
    assert rep.conductor_exponent == 1
    assert rep.v_delta_min == 2
    assert rep.actual_type in (SPLIT_MULTIPLICATIVE, NONSPLIT_MULTIPLICATIVE)
    assert _vp(conductor(E), 11) == 1


def test_additive_at_2_example():
    rep = classify_reduction(X3_MINUS_X, 2)
    assert rep.actual_type == ADDITIVE
    assert rep.conductor_exponent == 5


def test_split_test_against_point_count_oracle():
    """Split multiplicative <=> p - 1 points on the reduced curve away from
    the node (counted with infinity); brute-force count, no Legendre symbols."""
    mult_cases = []
    candidates = [m for m, _ in ANCHORS] + [
        curve_from_pair(1, 11).model,
        curve_from_pair(2, -3).model,
        curve_from_pair(3, 14).model,
        curve_from_pair(-5, 7).model,
    ]
    for model in candidates:
        for p in sorted(factorize(int(model.disc))):
            rep = classify_reduction(model, p)
            if rep.conductor_exponent != 1:
                continue
            mult_cases.append((rep, p))
            Wm = rep.minimal_model
            a1, a2, a3, a4, a6 = (int(c) % p for c in Wm.coeffs())
            count = 1  # infinity is always nonsingular
            for x in range(p):
                for y in range(p):
                    lhs = (y * y + a1 * x * y + a3 * y) % p
                    rhs = (((x + a2) * x + a4) * x + a6) % p
                    if lhs != rhs:
                        continue
                    fx = (a1 * y - (3 * x * x + 2 * a2 * x + a4)) % p
                    fy = (2 * y + a1 * x + a3) % p
                    if fx == 0 and fy == 0:
                        continue  # the node
                    count += 1
            expect_split = count == p - 1
            got_split = rep.actual_type == SPLIT_MULTIPLICATIVE
            assert got_split == expect_split, (model, p)
    assert len(mult_cases) >= 6


TAME_TYPES = {
    2: "II",
    3: "III",
    4: "IV",
    6: "I0*",
    8: "IV*",
    9: "III*",
    10: "II*",
}


def tame_oracle(model: WeierstrassModel, p: int):
    """Independent Kodaira/exponent oracle for p >= 5 from invariant
    valuations of the p-minimalized (c4, c6, Delta)."""
    assert p >= 5
    c4, c6, delta = int(model.c4), int(model.c6), int(model.disc)
    vc4, vc6, vd = _vp(c4, p) if c4 else 10**9, _vp(c6, p) if c6 else 10**9, _vp(delta, p)
    k = min(vc4 // 4, vc6 // 6, vd // 12)
    vc4, vd = vc4 - 4 * k, vd - 12 * k
    if vd == 0:
        return "I0", 0
    if vc4 == 0:
        return f"I{vd}", 1
    if vd == 6:
        return "I0*", 2
    if vd > 6 and vc4 == 2:
        return f"I{vd - 6}*", 2
    return TAME_TYPES[vd], 2


def random_model_corpus(seed, n):
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        try:
            out.append(
                W(
                    rng.randint(-2, 2),
                    rng.randint(-4, 4),
                    rng.randint(-2, 2),
                    rng.randint(-6, 6),
                    rng.randint(-6, 6),
                )
            )
        except DegenerateCurveError:
            continue
    while len(out) < n + 10:
        a, b = rng.randint(-20, 20), rng.randint(-20, 20)
        if a and b and a != b:
            out.append(curve_from_pair(a, b).model)
    return out


def test_machine_matches_tame_oracle():
    for model in random_model_corpus(7, 25):
        delta = int(model.disc)
        for p in sorted(factorize(delta)):
            if p < 5:
                continue
            out = tate_algorithm(model, p)
            typ, f = tame_oracle(model, p)
            assert (out.kodaira_type, out.conductor_exponent) == (typ, f), (model, p)


def test_consistency_triple_on_corpus():
    for model in random_model_corpus(13, 20):
        N = conductor(model)
        j = model.j
        for p in primes_up_to(100):
            rep = classify_reduction(model, p)
            f = rep.conductor_exponent
            assert f == _vp(N, p)
            assert (f == 0) == (rep.v_delta_min == 0)
            if f == 1:
                vj = _vp(j.numerator, p) - _vp(j.denominator, p)
                assert vj < 0 and vj == -rep.v_delta_min
                assert _vp(int(rep.minimal_model.c4), p) == 0


def test_conductor_invariant_under_model_changes():
    rng = random.Random(101)
    for model in random_model_corpus(19, 8):
        N = conductor(model)
        for _ in range(3):
            u = Fraction(rng.choice([1, 2, 3, 5]), rng.choice([1, 2, 3]))
            r = Fraction(rng.randint(-3, 3), rng.choice([1, 2]))
            s = Fraction(rng.randint(-2, 2))
            t = Fraction(rng.randint(-3, 3), rng.choice([1, 3]))
            assert conductor(model.transform(u, r, s, t)) == N


def test_minimal_model_identity_when_already_minimal():
    model = X3_MINUS_X.model
    mm, (u, r, s, t) = minimal_model_at(model, 2)
    assert mm == model
    assert (u, r, s, t) == (1, 0, 0, 0)


def test_minimal_model_descales_u2():
    blown = W(0, 0, 0, -16, 0)  # u = 2 rescaling of y^2 = x^3 - x
    mm, (u, r, s, t) = minimal_model_at(blown, 2)
    assert mm == X3_MINUS_X.model
    assert u == 2
    assert blown.transform(u, r, s, t) == mm
    assert blown.disc == mm.disc * 2**12


def test_minimal_model_descales_u3():
    blown = W(0, 0, 0, -81, 0)  # u = 3 rescaling of y^2 = x^3 - x
    mm, (u, r, s, t) = minimal_model_at(blown, 3)
    assert mm == X3_MINUS_X.model
    assert u == 3


def test_minimal_model_transform_verifies():
    rng = random.Random(3)
    for model in random_model_corpus(23, 6):
        for p in [2, 3, 5, 7]:
            blow = model.transform(Fraction(1, p), 0, 0, 0)
            mm, (u, r, s, t) = minimal_model_at(blow, p)
            assert blow.transform(u, r, s, t) == mm
            assert all(
                (c.denominator % p) != 0 for c in mm.coeffs()
            )


def test_good_classification_matches_supersingularity():
    for model in random_model_corpus(29, 10):
        for p in primes_up_to(60):
            if p == 2:
                continue
            rep = classify_reduction(model, p)
            if rep.conductor_exponent != 0:
                continue
            ss = is_supersingular_at(rep.minimal_model, p)
            assert (rep.actual_type == GOOD_SUPERSINGULAR) == ss


def test_potential_type_examples():
    assert potential_type(X3_MINUS_X, 7) == POT_GOOD_SUPERSINGULAR
    assert potential_type(X3_MINUS_X, 5) == POT_GOOD_ORDINARY
    E = curve_from_pair(1, 11)
    assert potential_type(E, 11) == POT_MULTIPLICATIVE
    with pytest.raises(UnsupportedPrimeError):
        potential_type(X3_MINUS_X, 2)


def test_potential_type_iff_j_valuation():
    for model in random_model_corpus(31, 15):
        j = model.j
        for p in [3, 5, 7, 11, 13]:
            vj = _vp(j.numerator, p) - _vp(j.denominator, p) if j != 0 else 10**9
            pot = potential_type(model, p)
            assert (pot == POT_MULTIPLICATIVE) == (vj < 0)


def test_potential_type_agrees_with_actual_good_reduction():
    # at a good odd prime the potential type must equal the actual type
    for model in random_model_corpus(37, 12):
        for p in primes_up_to(50):
            if p == 2:
                continue
            rep = classify_reduction(model, p)
            if rep.conductor_exponent != 0:
                continue
            expected = (
                POT_GOOD_SUPERSINGULAR
                if rep.actual_type == GOOD_SUPERSINGULAR
                else POT_GOOD_ORDINARY
            )
            assert rep.potential_type == expected


def test_conductor_rejects_singular():
    with pytest.raises(DegenerateCurveError):
        conductor(curve_from_pair(1, 1))


TWIST_TRANSITION = {
    "I0": "I0*",
    "II": "IV*",
    "III": "III*",
    "IV": "II*",
    "I0*": "I0",
    "IV*": "II",
    "III*": "III",
    "II*": "IV",
}


def test_quadratic_twist_transition_oracle():
    """At a tame prime, twisting by p swaps types in the classical pattern
    I_n <-> I_n*, II <-> IV*, III <-> III*, IV <-> II*; the twisted curve is
    always additive with f = 2.  This exercises the step machine end to end
    against an independent structural fact."""
    rng = random.Random(424)
    checked = {}
    for _ in range(60):
        p = rng.choice([5, 7, 11, 13])
        A = rng.randint(-40, 40)
        B = rng.randint(-40, 40)
        try:
            E = W(0, 0, 0, A, B)
        except DegenerateCurveError:
            continue
        out = tate_algorithm(E, p)
        twist = W(0, 0, 0, A * p * p, B * p**3)
        tout = tate_algorithm(twist, p)
        typ = out.kodaira_type
        if typ.startswith("I") and typ not in TWIST_TRANSITION:
            n = typ.rstrip("*")[1:]
            expected = f"I{n}" if typ.endswith("*") else f"I{n}*"
        else:
            expected = TWIST_TRANSITION[typ]
        assert tout.kodaira_type == expected, (A, B, p, typ, tout.kodaira_type)
        if expected != "I0" and not (expected.startswith("I") and not expected.endswith("*")):
            assert tout.conductor_exponent == 2
        checked[expected] = checked.get(expected, 0) + 1
    assert len(checked) >= 3  # the random corpus hit a spread of types


def test_machine_transform_composition_is_exact():
    # the composed (u, r, s, t) must carry the input model to the machine's
    # final model, translations included
    models = [m for m, _ in ANCHORS] + random_model_corpus(47, 10)
    for model in models:
        for p in sorted(factorize(int(model.disc))):
            out = tate_algorithm(model, p)
            u, r, s, t = out.transform
            assert model.transform(u, r, s, t) == out.model, (model, p)


def test_report_invariants_actual_type_coherence():
    for model in random_model_corpus(41, 15):
        for p in primes_up_to(60):
            rep = classify_reduction(model, p)
            f = rep.conductor_exponent
            if rep.actual_type in (GOOD_ORDINARY, GOOD_SUPERSINGULAR):
                assert f == 0 and rep.v_delta_min == 0
                assert rep.kodaira_type == "I0"
            elif rep.actual_type in (SPLIT_MULTIPLICATIVE, NONSPLIT_MULTIPLICATIVE):
                assert f == 1 and rep.v_delta_min > 0
                assert rep.kodaira_type == f"I{rep.v_delta_min}"
            else:
                assert rep.actual_type == ADDITIVE and f >= 2
