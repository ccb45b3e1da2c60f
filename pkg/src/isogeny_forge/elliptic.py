"""Elliptic curves over Q in two-torsion and general Weierstrass form, with
exact point counting and group structure over prime fields.

Counting is character-sum based, O(p) per prime, which is the right tool at
desk scale; nothing here ever rounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .errors import BadPrimeError, DegenerateCurveError, UnsupportedPrimeError
from .exactnum import factorize, is_prime


@dataclass(frozen=True)
class WeierstrassModel:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with rational coefficients."""

    a1: Fraction
    a2: Fraction
    a3: Fraction
    a4: Fraction
    a6: Fraction

    @staticmethod
    def from_coeffs(a1, a2, a3, a4, a6) -> "WeierstrassModel":
        W = WeierstrassModel(
            Fraction(a1), Fraction(a2), Fraction(a3), Fraction(a4), Fraction(a6)
        )
        if W.disc == 0:
            raise DegenerateCurveError("singular Weierstrass model (disc = 0)")
        return W

    @property
    def b2(self) -> Fraction:
        return self.a1 * self.a1 + 4 * self.a2

    @property
    def b4(self) -> Fraction:
        return 2 * self.a4 + self.a1 * self.a3

    @property
    def b6(self) -> Fraction:
        return self.a3 * self.a3 + 4 * self.a6

    @property
    def b8(self) -> Fraction:
        return (
            self.a1 * self.a1 * self.a6
            + 4 * self.a2 * self.a6
            - self.a1 * self.a3 * self.a4
            + self.a2 * self.a3 * self.a3
            - self.a4 * self.a4
        )

    @property
    def c4(self) -> Fraction:
        return self.b2 * self.b2 - 24 * self.b4

    @property
    def c6(self) -> Fraction:
        return -self.b2 ** 3 + 36 * self.b2 * self.b4 - 216 * self.b6

    @property
    def disc(self) -> Fraction:
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        return -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    @property
    def j(self) -> Fraction:
        return self.c4 ** 3 / self.disc

    def coeffs(self) -> tuple[Fraction, ...]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs())

    def transform(self, u, r, s, t) -> "WeierstrassModel":
        """Admissible change of model x = u^2 x' + r, y = u^3 y' + s u^2 x' + t."""
        u, r, s, t = Fraction(u), Fraction(r), Fraction(s), Fraction(t)
        if u == 0:
            raise ValueError("u must be nonzero")
        a1, a2, a3, a4, a6 = self.coeffs()
        na1 = (a1 + 2 * s) / u
        na2 = (a2 - s * a1 + 3 * r - s * s) / u ** 2
        na3 = (a3 + r * a1 + 2 * t) / u ** 3
        na4 = (a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t) / u ** 4
        na6 = (a6 + r * a4 + r * r * a2 + r ** 3 - t * a3 - t * t - r * t * a1) / u ** 6
        return WeierstrassModel(na1, na2, na3, na4, na6)


@dataclass(frozen=True)
class TwoTorsionCurve:
    """y^2 = x(x - a)(x - b): an elliptic curve with full rational 2-torsion."""

    a: int
    b: int

    def __post_init__(self):
        if self.a == 0:
            raise DegenerateCurveError("a = 0 makes the cubic non-squarefree")
        if self.b == 0:
            raise DegenerateCurveError("b = 0 makes the cubic non-squarefree")
        if self.a == self.b:
            raise DegenerateCurveError("a = b makes the cubic non-squarefree")

    @property
    def model(self) -> WeierstrassModel:
        return WeierstrassModel(
            Fraction(0),
            Fraction(-(self.a + self.b)),
            Fraction(0),
            Fraction(self.a * self.b),
            Fraction(0),
        )

    @property
    def delta(self) -> int:
        a, b = self.a, self.b
        return 16 * a * a * b * b * (a - b) * (a - b)

    @property
    def j(self) -> Fraction:
        a, b = self.a, self.b
        return Fraction(256 * (a * a - a * b + b * b) ** 3, a * a * b * b * (a - b) ** 2)


def curve_from_pair(a: int, b: int) -> TwoTorsionCurve:
    """Build y^2 = x(x-a)(x-b); the returned curve's model has exact disc and j."""
    return TwoTorsionCurve(int(a), int(b))


def _as_model(curve) -> WeierstrassModel:
    if isinstance(curve, TwoTorsionCurve):
        return curve.model
    if isinstance(curve, WeierstrassModel):
        return curve
    raise TypeError(f"not an elliptic curve object: {curve!r}")


def _coeffs_mod_p(W: WeierstrassModel, p: int) -> tuple[int, int, int, int, int]:
    out = []
    for c in W.coeffs():
        den = c.denominator
        if den % p == 0:
            raise BadPrimeError(f"model is not {p}-integral")
        out.append(c.numerator * pow(den, -1, p) % p)
    return tuple(out)


def _check_counting_prime(W: WeierstrassModel, p: int) -> None:
    if p < 2 or not is_prime(p):
        raise BadPrimeError(f"p = {p} is not prime")
    if any(c.denominator % p == 0 for c in W.coeffs()):
        raise BadPrimeError(f"model is not {p}-integral")
    if W.disc.numerator % p == 0:
        raise BadPrimeError(f"bad reduction at p = {p} (p divides the model discriminant)")
    if p == 2:
        raise UnsupportedPrimeError("p = 2 is excluded from counting operations")


def ap_trace(curve, p: int) -> int:
    """Trace of Frobenius a_p = p + 1 - #E(F_p) at an odd prime of good
    reduction for the given model.

    Computed as -sum_x chi(g(x)) for the completed square
    g = 4x^3 + b2 x^2 + 2 b4 x + b6; exactness is inherited from the
    Legendre-symbol sum.
    """
    W = _as_model(curve)
    _check_counting_prime(W, p)
    a1, a2, a3, a4, a6 = _coeffs_mod_p(W, p)
    b2 = (a1 * a1 + 4 * a2) % p
    b4 = (2 * a4 + a1 * a3) % p
    b6 = (a3 * a3 + 4 * a6) % p
    # chi via a residue table: chi[v] = legendre(v, p)
    chi = _chi_table(p)
    total = 0
    for x in range(p):
        g = (((4 * x + b2) * x + 2 * b4) * x + b6) % p
        total += chi[g]
    ap = -total
    assert ap * ap <= 4 * p, "Hasse bound violated: counting bug"
    return ap


@lru_cache(maxsize=None)
def _chi_table(p: int) -> tuple[int, ...]:
    tab = [-1] * p
    tab[0] = 0
    for t in range(1, p):
        tab[t * t % p] = 1
    return tuple(tab)


@lru_cache(maxsize=None)
def _sqrt_table(p: int) -> dict[int, tuple[int, ...]]:
    roots: dict[int, tuple[int, ...]] = {0: (0,)}
    for t in range(1, (p + 1) // 2 + 1):
        v = t * t % p
        if v not in roots:
            roots[v] = (t, (p - t) % p) if t != (p - t) % p else (t,)
    return roots


def is_supersingular_at(curve, p: int) -> bool:
    """True iff a_p = 0 mod p (equivalently a_p = 0 once p >= 5)."""
    return ap_trace(curve, p) % p == 0


Point = Optional[tuple[int, int]]  # None is the point at infinity


class EllipticGroup:
    """The group E(F_p) as an explicit finite abelian group.

    Points are (x, y) tuples with None as identity; the chord-tangent law is
    implemented for the general Weierstrass shape so reduced minimal models
    can be used directly.
    """

    def __init__(self, W: WeierstrassModel, p: int):
        _check_counting_prime(W, p)
        self.p = p
        self.a1, self.a2, self.a3, self.a4, self.a6 = _coeffs_mod_p(W, p)
        self.points = self._enumerate()
        self.index = {pt: i for i, pt in enumerate(self.points)}
        self._order_cache: dict[Point, int] = {}

    def _enumerate(self) -> list[Point]:
        p = self.p
        a1, a2, a3, a4, a6 = self.a1, self.a2, self.a3, self.a4, self.a6
        b2 = (a1 * a1 + 4 * a2) % p
        b4 = (2 * a4 + a1 * a3) % p
        b6 = (a3 * a3 + 4 * a6) % p
        inv2 = pow(2, -1, p)
        pts: list[Point] = [None]
        roots = _sqrt_table(p)
        for x in range(p):
            g = (((4 * x + b2) * x + 2 * b4) * x + b6) % p
            for eta in roots.get(g, ()):
                y = (eta - a1 * x - a3) * inv2 % p
                pts.append((x, y))
        return pts

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def on_curve(self, P: Point) -> bool:
        if P is None:
            return True
        x, y = P
        p = self.p
        lhs = (y * y + self.a1 * x * y + self.a3 * y) % p
        rhs = (((x + self.a2) * x + self.a4) * x + self.a6) % p
        return lhs == rhs

    def neg(self, P: Point) -> Point:
        if P is None:
            return None
        x, y = P
        return (x, (-y - self.a1 * x - self.a3) % self.p)

    def add(self, P: Point, Q: Point) -> Point:
        if P is None:
            return Q
        if Q is None:
            return P
        p = self.p
        a1, a2, a3, a4, a6 = self.a1, self.a2, self.a3, self.a4, self.a6
        x1, y1 = P
        x2, y2 = Q
        if x1 == x2 and (y1 + y2 + a1 * x2 + a3) % p == 0:
            return None
        if x1 != x2:
            lam = (y2 - y1) * pow(x2 - x1, -1, p) % p
            nu = (y1 * x2 - y2 * x1) * pow(x2 - x1, -1, p) % p
        else:
            den = (2 * y1 + a1 * x1 + a3) % p
            lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) * pow(den, -1, p) % p
            nu = (-(x1 ** 3) + a4 * x1 + 2 * a6 - a3 * y1) * pow(den, -1, p) % p
        x3 = (lam * lam + a1 * lam - a2 - x1 - x2) % p
        y3 = (-(lam + a1) * x3 - nu - a3) % p
        return (x3, y3)

    def scalar(self, n: int, P: Point) -> Point:
        if n < 0:
            return self.scalar(-n, self.neg(P))
        R: Point = None
        Q = P
        while n:
            if n & 1:
                R = self.add(R, Q)
            Q = self.add(Q, Q)
            n >>= 1
        return R

    def order_of(self, P: Point) -> int:
        if P in self._order_cache:
            return self._order_cache[P]
        N = len(self.points)
        o = N
        for q, e in factorize(N).items():
            while o % q == 0 and self.scalar(o // q, P) is None:
                o //= q
        assert self.scalar(o, P) is None
        self._order_cache[P] = o
        return o

    def exponent(self) -> int:
        from math import lcm

        e = 1
        for P in self.points:
            e = lcm(e, self.order_of(P))
        return e

    def structure(self) -> list[int]:
        """Invariant factors [n1, n2] (or [n]) with n1 | n2, certified by
        torsion counts against the claimed decomposition."""
        N = len(self.points)
        e = self.exponent()
        n1, rem = divmod(N, e)
        assert rem == 0 and (n1 == 1 or e % n1 == 0), "not a rank <= 2 group?"
        for d in _divisors(e):
            want = _gcd(d, n1) * _gcd(d, e)
            got = sum(1 for P in self.points if self.scalar(d, P) is None)
            assert got == want, f"torsion count mismatch at d={d}"
        return [e] if n1 == 1 else [n1, e]

    def generators(self) -> list[Point]:
        """A minimal generating set (one or two points)."""
        e = self.exponent()
        P = next(pt for pt in self.points if self.order_of(pt) == e)
        if e == len(self.points):
            return [P]
        span = self._span([P])
        for Q in self.points:
            if Q in span:
                continue
            if len(self._span([P, Q])) == len(self.points):
                return [P, Q]
        raise AssertionError("no two-element generating set found")

    def _span(self, gens: list[Point]) -> set[Point]:
        seen: set[Point] = {None}
        frontier = [None]
        while frontier:
            nxt = []
            for R in frontier:
                for g in gens:
                    S = self.add(R, g)
                    if S not in seen:
                        seen.add(S)
                        nxt.append(S)
            frontier = nxt
        return seen

    def two_torsion(self) -> list[Point]:
        return [P for P in self.points if P is not None and self.add(P, P) is None]


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _divisors(n: int) -> list[int]:
    ds = [1]
    for q, e in factorize(n).items():
        ds = [d * q ** k for d in ds for k in range(e + 1)]
    return sorted(ds)


def rational_points_mod_p(curve, p: int) -> EllipticGroup:
    """Complete enumeration of E(F_p) with group law and structure."""
    return EllipticGroup(_as_model(curve), p)


def count_points(curve, p: int) -> int:
    """#E(F_p) = p + 1 - a_p."""
    return p + 1 - ap_trace(curve, p)
