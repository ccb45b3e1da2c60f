"""Local reduction theory over Q: p-minimal models, Kodaira types, conductor
exponents, and actual/potential reduction classification.

The classifier is a single step machine valid at every prime, including the
wild primes 2 and 3.  Conductor exponents come out of the type together with
v_p(Delta_min) (f = v(Delta_min) - #components + 1), so wild contributions
are handled without a separate ramification computation.

Normalizing translations are found by small exhaustive search at p = 2, 3 and
by closed formulas modulo a high power of p at odd primes; every normalization
is re-checked with assertions so a misnavigated step fails loudly instead of
misclassifying.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .elliptic import TwoTorsionCurve, WeierstrassModel, is_supersingular_at
from .errors import UnsupportedPrimeError
from .exactnum import factorize, legendre_symbol

GOOD_ORDINARY = "GoodOrdinary"
GOOD_SUPERSINGULAR = "GoodSupersingular"
SPLIT_MULTIPLICATIVE = "SplitMultiplicative"
NONSPLIT_MULTIPLICATIVE = "NonsplitMultiplicative"
ADDITIVE = "Additive"

POT_GOOD_ORDINARY = "PotGoodOrdinary"
POT_GOOD_SUPERSINGULAR = "PotGoodSupersingular"
POT_MULTIPLICATIVE = "PotMultiplicative"

Curve = Union[TwoTorsionCurve, WeierstrassModel]


@dataclass(frozen=True)
class ReductionReport:
    prime: int
    kodaira_type: str
    v_delta_min: int
    conductor_exponent: int
    actual_type: str
    potential_type: Optional[str]
    minimal_model: WeierstrassModel


@dataclass(frozen=True)
class TateOutcome:
    kodaira_type: str
    v_delta_min: int
    conductor_exponent: int
    split: Optional[bool]  # multiplicative types only
    model: WeierstrassModel  # p-minimal, p-integral
    transform: tuple[Fraction, Fraction, Fraction, Fraction]  # (u, r, s, t)
    restarts: int


def _as_model(curve: Curve) -> WeierstrassModel:
    if isinstance(curve, TwoTorsionCurve):
        return curve.model
    if isinstance(curve, WeierstrassModel):
        return curve
    raise TypeError(f"not an elliptic curve object: {curve!r}")


def _vp(n: int, p: int) -> int:
    if n == 0:
        return 10**9  # effectively +infinity at desk scale
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _vp_frac(q: Fraction, p: int) -> int:
    if q == 0:
        return 10**9
    return _vp(q.numerator, p) - _vp(q.denominator, p)


# -- small F_p[T] helpers (coefficient lists, low degree first) ---------------


def _poly_mod(f: list[int], p: int) -> list[int]:
    g = [c % p for c in f]
    while g and g[-1] == 0:
        g.pop()
    return g


def _poly_divmod(f: list[int], g: list[int], p: int):
    f = f[:]
    q = [0] * max(0, len(f) - len(g) + 1)
    inv_lead = pow(g[-1], -1, p)
    while len(f) >= len(g) and f:
        c = f[-1] * inv_lead % p
        d = len(f) - len(g)
        q[d] = c
        for i, gc in enumerate(g):
            f[i + d] = (f[i + d] - c * gc) % p
        while f and f[-1] == 0:
            f.pop()
    return q, f


def _poly_gcd(f: list[int], g: list[int], p: int) -> list[int]:
    f, g = _poly_mod(f, p), _poly_mod(g, p)
    while g:
        _, r = _poly_divmod(f, g, p)
        f, g = g, r
    if f:
        inv = pow(f[-1], -1, p)
        f = [c * inv % p for c in f]
    return f


def _poly_eval(f: list[int], x: int, p: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % p
    return acc


def _double_root_of_quadratic(alpha: int, beta: int, gamma: int, p: int) -> int:
    """The double root of alpha*X^2 + beta*X + gamma over F_p, given that the
    quadratic is inseparable (beta^2 = 4*alpha*gamma mod p) and alpha != 0."""
    if p == 2:
        assert beta % 2 == 0 and alpha % 2 == 1
        return gamma * alpha % 2
    return (-beta) * pow(2 * alpha, -1, p) % p


def _repeated_root_of_cubic(A2: int, A4: int, A6: int, p: int):
    """Root structure of T^3 + A2 T^2 + A4 T + A6 over F_p.

    Returns (kind, rho) with kind in {"separable", "double", "triple"}; rho is
    the repeated root when present (always rational for a cubic).
    """
    disc = (
        18 * A2 * A4 * A6 - 4 * A2**3 * A6 + A2 * A2 * A4 * A4 - 4 * A4**3 - 27 * A6 * A6
    ) % p
    if disc != 0:
        return "separable", None
    P = _poly_mod([A6, A4, A2, 1], p)
    dP = _poly_mod([A4, 2 * A2, 3], p)
    if not dP:
        # char 3 with P = (T - rho)^3 = T^3 - rho^3
        assert p == 3
        rho = (-A6) % 3  # cube roots via Frobenius
        assert _poly_eval(P, rho, p) == 0
        return "triple", rho
    g = _poly_gcd(P, dP, p)
    if len(g) == 2:
        rho = (-g[0]) % p
    elif len(g) == 3:
        # in char 2 the derivative is a square, so a plain double root also
        # lands here; the true multiplicity is measured below
        rho = _double_root_of_quadratic(1, g[1], g[0], p)
    else:
        raise AssertionError(f"impossible gcd degree {len(g) - 1} for a singular cubic")
    mult = 0
    q = P
    while True:
        q, rem = _poly_divmod(q, [(-rho) % p, 1], p)
        if rem:
            break
        mult += 1
    assert mult in (2, 3), f"repeated root of multiplicity {mult}?"
    return ("double", rho) if mult == 2 else ("triple", rho)


# -- the step machine ----------------------------------------------------------


def _ints(W: WeierstrassModel) -> tuple[int, int, int, int, int]:
    cs = W.coeffs()
    assert all(c.denominator == 1 for c in cs), "machine requires an integral model"
    return tuple(int(c) for c in cs)


def _singular_point(W: WeierstrassModel, p: int) -> tuple[int, int]:
    """The unique singular point of the reduction mod p, as lifts in [0, p)."""
    a1, a2, a3, a4, a6 = (c % p for c in _ints(W))
    if p == 2:
        for x0 in (0, 1):
            for y0 in (0, 1):
                F = (y0 * y0 + a1 * x0 * y0 + a3 * y0 - (x0**3 + a2 * x0 * x0 + a4 * x0 + a6)) % 2
                Fx = (a1 * y0 - (3 * x0 * x0 + 2 * a2 * x0 + a4)) % 2
                Fy = (2 * y0 + a1 * x0 + a3) % 2
                if F == 0 and Fx == 0 and Fy == 0:
                    return x0, y0
        raise AssertionError("no singular point found mod 2")
    b2 = (a1 * a1 + 4 * a2) % p
    b4 = (2 * a4 + a1 * a3) % p
    b6 = (a3 * a3 + 4 * a6) % p
    g = _poly_mod([b6, 2 * b4, b2, 4], p)
    dg = _poly_mod([2 * b4, 2 * b2, 12], p)
    if not dg:
        # p = 3 with g = 4(x - x0)^3; 4 = 1 mod 3
        assert p == 3
        x0 = (-b6) % 3
    else:
        h = _poly_gcd(g, dg, p)
        if len(h) == 2:
            x0 = (-h[0]) % p
        elif len(h) == 3:
            x0 = _double_root_of_quadratic(1, h[1], h[0], p)
        else:
            raise AssertionError("singular reduction without repeated root?")
    y0 = (-(a1 * x0 + a3)) * pow(2, -1, p) % p
    return x0, y0


_STEP6_BUFFER = 12  # odd p: zero a1, a3 modulo p^buffer; decisions only probe v <= 11


class _Machine:
    def __init__(self, W: WeierstrassModel, p: int):
        self.p = p
        self.start = W
        self.cur = W
        self.u = Fraction(1)
        self.r = Fraction(0)
        self.s = Fraction(0)
        self.t = Fraction(0)
        self.restarts = 0

    def apply(self, u, r, s, t) -> None:
        u, r, s, t = Fraction(u), Fraction(r), Fraction(s), Fraction(t)
        self.cur = self.cur.transform(u, r, s, t)
        # compose (self.u, ...) followed by (u, r, s, t)
        self.r = self.u**2 * r + self.r
        self.t = self.u**3 * t + self.s * self.u**2 * r + self.t
        self.s = self.u * s + self.s
        self.u = self.u * u

    def transform_tuple(self):
        return (self.u, self.r, self.s, self.t)


def tate_algorithm(curve: Curve, p: int) -> TateOutcome:
    """Kodaira type, v_p(Delta_min) and conductor exponent at p, together with
    the p-minimal model reached and the transformation to it."""
    W = _as_model(curve)
    if p < 2 or not _is_prime_cached(p):
        raise ValueError(f"p = {p} is not prime")
    m = _Machine(W, p)
    # make the model p-integral
    worst = 0
    for i, c in zip((1, 2, 3, 4, 6), W.coeffs()):
        v = _vp_frac(c, p)
        if v < 0:
            worst = max(worst, (-v + i - 1) // i)
    if worst:
        m.apply(Fraction(1, p**worst), 0, 0, 0)

    guard = 0
    while True:
        guard += 1
        assert guard < 64, "step machine failed to terminate"
        a1, a2, a3, a4, a6 = _ints(m.cur)
        delta = int(m.cur.disc)
        n = _vp(delta, p)
        if n == 0:
            return TateOutcome("I0", 0, 0, None, m.cur, m.transform_tuple(), m.restarts)

        r0, t0 = _singular_point(m.cur, p)
        m.apply(1, r0, 0, t0)
        a1, a2, a3, a4, a6 = _ints(m.cur)
        assert a3 % p == 0 and a4 % p == 0 and a6 % p == 0

        c4 = int(m.cur.c4)
        if _vp(c4, p) == 0:
            # multiplicative: the tangent cone at the node is
            # y^2 + a1 xy - a2 x^2; rational slopes <=> split
            if p == 2:
                split = a2 % 2 == 0
            else:
                split = legendre_symbol(-int(m.cur.c6) % p, p) == 1
            return TateOutcome(
                f"I{n}", n, 1, split, m.cur, m.transform_tuple(), m.restarts
            )

        if _vp(a6, p) < 2:
            return TateOutcome("II", n, n, None, m.cur, m.transform_tuple(), m.restarts)
        if _vp(int(m.cur.b8), p) < 3:
            return TateOutcome("III", n, n - 1, None, m.cur, m.transform_tuple(), m.restarts)
        if _vp(int(m.cur.b6), p) < 3:
            return TateOutcome("IV", n, n - 2, None, m.cur, m.transform_tuple(), m.restarts)

        _normalize_step6(m)
        a1, a2, a3, a4, a6 = _ints(m.cur)
        p2, p3 = p * p, p**3
        kind, rho = _repeated_root_of_cubic(
            (a2 // p) % p, (a4 // p2) % p, (a6 // p3) % p, p
        )
        if kind == "separable":
            return TateOutcome("I0*", n, n - 4, None, m.cur, m.transform_tuple(), m.restarts)
        if kind == "double":
            mm = _istar_subloop(m, rho)
            return TateOutcome(
                f"I{mm}*", n, n - 4 - mm, None, m.cur, m.transform_tuple(), m.restarts
            )
        # triple root
        m.apply(1, p * rho, 0, 0)
        a1, a2, a3, a4, a6 = _ints(m.cur)
        assert _vp(a2, p) >= 2 and _vp(a4, p) >= 3 and _vp(a6, p) >= 4
        A3 = (a3 // p2) % p
        A6 = (a6 // p**4) % p
        if (A3 * A3 + 4 * A6) % p != 0:
            return TateOutcome("IV*", n, n - 6, None, m.cur, m.transform_tuple(), m.restarts)
        y0 = _double_root_of_quadratic(1, A3, (-A6) % p, p)
        m.apply(1, 0, 0, p2 * y0)
        a1, a2, a3, a4, a6 = _ints(m.cur)
        assert _vp(a3, p) >= 3 and _vp(a6, p) >= 5
        if _vp(a4, p) < 4:
            return TateOutcome("III*", n, n - 7, None, m.cur, m.transform_tuple(), m.restarts)
        if _vp(a6, p) < 6:
            return TateOutcome("II*", n, n - 8, None, m.cur, m.transform_tuple(), m.restarts)
        # non-minimal: all a_i divisible by p^i after the normalizations
        assert _vp(a1, p) >= 1 and _vp(a2, p) >= 2
        m.apply(p, 0, 0, 0)
        m.restarts += 1


def _is_prime_cached(p: int) -> bool:
    from .exactnum import is_prime

    return is_prime(p)


def _normalize_step6(m: _Machine) -> None:
    """Arrange p | a1, a2; p^2 | a3, a4; p^3 | a6 by an (s, t) translation."""
    p = m.p
    a1, a2, a3, a4, a6 = _ints(m.cur)
    if p > 3:
        pk = p**_STEP6_BUFFER
        inv2 = pow(2, -1, pk)
        s = (-a1 * inv2) % pk
        t = (-a3 * inv2) % pk
        m.apply(1, 0, s, t)
    else:
        found = False
        for s in range(p):
            if found:
                break
            for t in range(p**3):
                na1 = a1 + 2 * s
                na2 = a2 - s * a1 - s * s
                na3 = a3 + 2 * t
                na4 = a4 - s * a3 - t * a1 - 2 * s * t
                na6 = a6 - t * a3 - t * t
                if (
                    na1 % p == 0
                    and na2 % p == 0
                    and na3 % p**2 == 0
                    and na4 % p**2 == 0
                    and na6 % p**3 == 0
                ):
                    m.apply(1, 0, s, t)
                    found = True
                    break
        assert found, "step-6 normalization not found (machine bug)"
    a1, a2, a3, a4, a6 = _ints(m.cur)
    assert (
        _vp(a1, p) >= 1
        and _vp(a2, p) >= 1
        and _vp(a3, p) >= 2
        and _vp(a4, p) >= 2
        and _vp(a6, p) >= 3
    ), "step-6 valuations failed"


def _istar_subloop(m: _Machine, rho: int) -> int:
    """The I_m* chain: returns m >= 1.

    Alternates between Y- and X-quadratics whose double roots are translated
    away until a separable one appears.
    """
    p = m.p
    m.apply(1, p * rho, 0, 0)
    a1, a2, a3, a4, a6 = _ints(m.cur)
    assert _vp(a2, p) == 1 and _vp(a4, p) >= 3 and _vp(a6, p) >= 4
    mm = 1
    while True:
        a1, a2, a3, a4, a6 = _ints(m.cur)
        if mm % 2 == 1:
            k = (mm + 3) // 2
            A3 = (a3 // p**k) % p
            A6 = (a6 // p ** (mm + 3)) % p
            if (A3 * A3 + 4 * A6) % p != 0:
                return mm
            y0 = _double_root_of_quadratic(1, A3, (-A6) % p, p)
            m.apply(1, 0, 0, p**k * y0)
            na = _ints(m.cur)
            assert _vp(na[2], p) >= k + 1 and _vp(na[4], p) >= mm + 4
        else:
            k = (mm + 4) // 2
            A2 = (a2 // p) % p
            A4 = (a4 // p**k) % p
            A6 = (a6 // p ** (mm + 3)) % p
            if (A4 * A4 - 4 * A2 * A6) % p != 0:
                return mm
            x0 = _double_root_of_quadratic(A2, A4, A6, p)
            m.apply(1, p ** (k - 1) * x0, 0, 0)
            na = _ints(m.cur)
            assert _vp(na[3], p) >= k + 1 and _vp(na[4], p) >= mm + 4
        mm += 1
        assert mm < 64, "I_m* chain failed to terminate"


# -- public operations ---------------------------------------------------------


def minimal_model_at(curve: Curve, p: int):
    """A p-minimal, p-integral model with the admissible (u, r, s, t) taking
    the input model to it.  Already-minimal integral inputs come back as-is
    with the identity transformation."""
    W = _as_model(curve)
    out = tate_algorithm(W, p)
    p_integral = all(_vp_frac(c, p) >= 0 for c in W.coeffs())
    if out.restarts == 0 and p_integral:
        ident = (Fraction(1), Fraction(0), Fraction(0), Fraction(0))
        return W, ident
    # prefer the bare rescale when it stays p-integral; translations from the
    # classification run are an implementation detail, not part of the answer
    u_net = out.transform[0]
    rescaled = W.transform(u_net, 0, 0, 0)
    if all(_vp_frac(c, p) >= 0 for c in rescaled.coeffs()):
        return rescaled, (u_net, Fraction(0), Fraction(0), Fraction(0))
    return out.model, out.transform


def classify_reduction(curve: Curve, p: int) -> ReductionReport:
    """Full local report at p (any prime, including 2 and 3)."""
    W = _as_model(curve)
    out = tate_algorithm(W, p)
    f = out.conductor_exponent
    if f == 0:
        if p == 2:
            actual = GOOD_SUPERSINGULAR if _count_mod2(out.model) % 2 == 1 else GOOD_ORDINARY
        else:
            actual = (
                GOOD_SUPERSINGULAR if is_supersingular_at(out.model, p) else GOOD_ORDINARY
            )
    elif f == 1:
        actual = SPLIT_MULTIPLICATIVE if out.split else NONSPLIT_MULTIPLICATIVE
    else:
        actual = ADDITIVE
    pot = potential_type(W, p) if p != 2 else None
    return ReductionReport(
        prime=p,
        kodaira_type=out.kodaira_type,
        v_delta_min=out.v_delta_min,
        conductor_exponent=f,
        actual_type=actual,
        potential_type=pot,
        minimal_model=out.model,
    )


def _count_mod2(W: WeierstrassModel) -> int:
    a1, a2, a3, a4, a6 = (int(c) % 2 for c in W.coeffs())
    n = 1
    for x in (0, 1):
        for y in (0, 1):
            if (y + a1 * x * y + a3 * y) % 2 == (x**3 + a2 * x * x + a4 * x + a6) % 2:
                n += 1
    return n


def conductor(curve: Curve) -> int:
    """N = prod p^{f_p} over the bad primes of the curve."""
    W = _as_model(curve)
    den = 1
    for c in W.coeffs():
        den = den * c.denominator // _gcd(den, c.denominator)
    if den != 1:
        W = W.transform(Fraction(1, den), 0, 0, 0)
    delta = int(W.disc)
    N = 1
    for p in factorize(delta):
        N *= p ** tate_algorithm(W, p).conductor_exponent
    return N


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def potential_type(curve: Curve, p: int) -> str:
    """Reduction type attained after a finite base extension, for odd p.

    Determined by v_p(j): negative means potentially multiplicative; otherwise
    the reduced j-invariant decides ordinary vs supersingular through any
    reference curve with that j (supersingularity is twist-invariant).
    """
    if p == 2:
        raise UnsupportedPrimeError("potential type is computed for odd primes only")
    if not _is_prime_cached(p) or p < 3:
        raise ValueError(f"p = {p} is not an odd prime")
    W = _as_model(curve)
    j = W.j
    if _vp_frac(j, p) < 0:
        return POT_MULTIPLICATIVE
    jbar = j.numerator * pow(j.denominator, -1, p) % p
    if p == 3:
        # the unique supersingular j in characteristic 3 is 0 (= 1728)
        return POT_GOOD_SUPERSINGULAR if jbar == 0 else POT_GOOD_ORDINARY
    if jbar == 0:
        A, B = 0, 1
    elif jbar == 1728 % p:
        A, B = 1, 0
    else:
        A = 3 * jbar * (1728 - jbar) % p
        B = 2 * jbar * (1728 - jbar) ** 2 % p
    ap = _short_model_trace(A, B, p)
    return POT_GOOD_SUPERSINGULAR if ap % p == 0 else POT_GOOD_ORDINARY


def _short_model_trace(A: int, B: int, p: int) -> int:
    from .elliptic import _chi_table

    chi = _chi_table(p)
    total = 0
    for x in range(p):
        total += chi[((x * x + A) * x + B) % p]
    return -total
