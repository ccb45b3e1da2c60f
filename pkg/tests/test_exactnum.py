import random

import pytest

from isogeny_forge.exactnum import (
    ColumnLattice,
    IntMatrix,
    factorize,
    is_prime,
    legendre_symbol,
    primes_up_to,
    smith_normal_form,
    smith_normal_form_transforms,
    solve_integer_linear,
    xgcd,
)


def test_primes_up_to_small():
    assert primes_up_to(1) == []
    assert primes_up_to(2) == [2]
    assert primes_up_to(10) == [2, 3, 5, 7]
    assert primes_up_to(0) == []


def test_primes_up_to_matches_trial_division():
    def trial(n):
        return n > 1 and all(n % d for d in range(2, n))

    assert primes_up_to(500) == [n for n in range(501) if trial(n)]


def test_is_prime_small_range():
    for n in range(-5, 2000):
        naive = n > 1 and all(n % d for d in range(2, n))
        assert is_prime(n) == naive, n


def test_factorize():
    assert factorize(1) == {}
    assert factorize(-360) == {2: 3, 3: 2, 5: 1}
    assert factorize(2**6 * 7**3) == {2: 6, 7: 3}
    n = 10007 * 10009
    assert factorize(n) == {10007: 1, 10009: 1}
    with pytest.raises(ValueError):
        factorize(0)


def test_legendre_divisibility_case():
    assert legendre_symbol(0, 5) == 0
    assert legendre_symbol(10, 5) == 0


def test_legendre_by_exhaustion_mod_7():
    # squares mod 7 are {1, 2, 4}
    squares = {t * t % 7 for t in range(1, 7)}
    assert squares == {1, 2, 4}
    assert legendre_symbol(2, 7) == 1
    assert legendre_symbol(3, 7) == -1


def test_legendre_matches_square_sets():
    for p in [3, 5, 7, 11, 13, 17, 19, 23]:
        squares = {t * t % p for t in range(1, p)}
        for a in range(p):
            expected = 0 if a == 0 else (1 if a in squares else -1)
            assert legendre_symbol(a, p) == expected


def test_legendre_rejects_bad_modulus():
    for p in [1, 2, 4, 9, 15]:
        with pytest.raises(ValueError):
            legendre_symbol(3, p)


def test_xgcd():
    rng = random.Random(7)
    for _ in range(200):
        a = rng.randint(-500, 500)
        b = rng.randint(-500, 500)
        g, x, y = xgcd(a, b)
        assert g >= 0
        assert a * x + b * y == g
        if a or b:
            assert a % g == 0 and b % g == 0


# -- Smith normal form -------------------------------------------------------


def test_snf_zero_matrix():
    M = IntMatrix.from_rows([[0, 0], [0, 0], [0, 0]])
    assert smith_normal_form(M) == [0, 0]


def test_snf_hand_examples():
    assert smith_normal_form(IntMatrix.from_rows([[2, 0], [0, 3]])) == [1, 6]
    assert smith_normal_form(IntMatrix.from_rows([[2, 4], [0, 2]])) == [2, 2]


def test_snf_divisibility_chain_and_transforms():
    rng = random.Random(1234)
    for _ in range(60):
        rows = rng.randint(1, 5)
        cols = rng.randint(1, 5)
        M = IntMatrix.from_rows(
            [[rng.randint(-9, 9) for _ in range(cols)] for _ in range(rows)]
        )
        res = smith_normal_form_transforms(M)
        facs = res.factors
        for d in facs:
            assert d >= 0
        for d1, d2 in zip(facs, facs[1:]):
            if d1:
                assert d2 % d1 == 0
            else:
                assert d2 == 0
        assert res.verify(M)


# -- Integer linear solving ---------------------------------------------------


def test_solve_trivial_cases():
    M = IntMatrix.from_rows([[2]])
    assert solve_integer_linear(M, [4]) == [2]
    assert solve_integer_linear(M, [3]) is None


def test_solve_two_by_two():
    M = IntMatrix.from_rows([[1, 0], [1, 2]])
    assert solve_integer_linear(M, [1, 3]) == [1, 1]


def test_solve_dimension_mismatch():
    M = IntMatrix.from_rows([[1, 0], [1, 2]])
    with pytest.raises(ValueError):
        solve_integer_linear(M, [1, 2, 3])


def test_solve_fuzz_constructed_solutions():
    rng = random.Random(99)
    for _ in range(120):
        rows = rng.randint(1, 5)
        cols = rng.randint(1, 6)
        M = IntMatrix.from_rows(
            [[rng.randint(-6, 6) for _ in range(cols)] for _ in range(rows)]
        )
        x = [rng.randint(-5, 5) for _ in range(cols)]
        t = M.mul_vector(x)
        sol = solve_integer_linear(M, t)
        assert sol is not None
        assert M.mul_vector(sol) == t


def test_solve_none_answers_are_honest():
    # when the solver says "none", exhaustive search over a box agrees
    rng = random.Random(555)
    checked_none = 0
    for _ in range(300):
        rows = rng.randint(1, 3)
        cols = rng.randint(1, 2)
        M = IntMatrix.from_rows(
            [[rng.randint(-3, 3) for _ in range(cols)] for _ in range(rows)]
        )
        t = [rng.randint(-4, 4) for _ in range(rows)]
        sol = solve_integer_linear(M, t)
        if sol is not None:
            assert M.mul_vector(sol) == t
            continue
        checked_none += 1
        box = range(-30, 31)
        if cols == 1:
            found = any(M.mul_vector([x]) == t for x in box)
        else:
            found = any(
                M.mul_vector([x, y]) == t for x in box for y in box
            )
        assert not found
    assert checked_none > 10


def test_column_lattice_membership_and_certificates():
    rng = random.Random(2024)
    dim = 6
    lat = ColumnLattice(dim)
    gens = []
    for _ in range(8):
        g = [rng.randint(-4, 4) for _ in range(dim)]
        gens.append(g)
        lat.add_generator(g)
    for _ in range(40):
        coeffs = [rng.randint(-3, 3) for _ in range(len(gens))]
        target = [sum(c * g[j] for c, g in zip(coeffs, gens)) for j in range(dim)]
        rem, cert = lat.reduce(target)
        assert not any(rem)
        rebuilt = [0] * dim
        for k, c in cert.items():
            for j in range(dim):
                rebuilt[j] += c * gens[k][j]
        assert rebuilt == target
