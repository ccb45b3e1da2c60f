"""Formal symbol algebra over E(F_q) with machine-checked derivations.

Symbols {a_1, ..., a_r} over a finite symbol universe are modeled as integer
vectors; relation families (slot bilinearity, plus the two reciprocity
families coming from vertical lines and chords) generate an integer lattice,
and statements like skew-symmetry become lattice-membership questions with
exact, re-verifiable certificates.

Nothing here claims to compute a full symbol group: success certifies that a
target lies in the span of the explicitly generated relations, and failure is
a statement about that generated subset only (certified by echelon reduction).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct
from typing import Iterable, Optional, Sequence

from .elliptic import EllipticGroup, Point
from .errors import BudgetExceededError, InvalidConfigurationError
from .exactnum import ColumnLattice

PLUS = "plus"
MINUS = "minus"


def _curve_key(G: EllipticGroup):
    return (G.p, G.a1, G.a2, G.a3, G.a4, G.a6)


class SymbolUniverse:
    """All symbols whose enumerated slots range over the given point groups,
    with an optional tuple of fixed tail points (never enumerated)."""

    def __init__(self, slot_groups: Sequence[EllipticGroup], tail: tuple = ()):
        if not slot_groups:
            raise ValueError("need at least one enumerated slot")
        self.slot_groups = tuple(slot_groups)
        self.tail = tuple(tail)
        self.sizes = tuple(len(g.points) for g in slot_groups)
        self.dimension = 1
        for n in self.sizes:
            self.dimension *= n
        self._strides = []
        acc = 1
        for n in reversed(self.sizes):
            self._strides.append(acc)
            acc *= n
        self._strides.reverse()

    @property
    def r(self) -> int:
        return len(self.slot_groups) + len(self.tail)

    def index_of(self, pts: Sequence[Point]) -> int:
        idx = 0
        for g, s, pt in zip(self.slot_groups, self._strides, pts):
            idx += g.index[pt] * s
        return idx

    def tuple_of(self, idx: int) -> tuple[Point, ...]:
        out = []
        for g, s in zip(self.slot_groups, self._strides):
            q, idx = divmod(idx, s)
            out.append(g.points[q])
        return tuple(out)

    def same_universe(self, other: "SymbolUniverse") -> bool:
        return (
            tuple(map(_curve_key, self.slot_groups))
            == tuple(map(_curve_key, other.slot_groups))
            and self.tail == other.tail
        )

    def describe(self, idx: int) -> str:
        pts = self.tuple_of(idx) + self.tail
        return "{" + ", ".join("0" if p is None else str(p) for p in pts) + "}"


class SymbolSum:
    """Formal integer combination of universe symbols (sparse)."""

    def __init__(self, universe: SymbolUniverse, coeffs: Optional[dict[int, int]] = None):
        self.universe = universe
        self.coeffs = {k: v for k, v in (coeffs or {}).items() if v}

    @staticmethod
    def symbol(universe: SymbolUniverse, pts: Sequence[Point], coeff: int = 1) -> "SymbolSum":
        return SymbolSum(universe, {universe.index_of(pts): coeff})

    def __add__(self, other: "SymbolSum") -> "SymbolSum":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return SymbolSum(self.universe, out)

    def __sub__(self, other: "SymbolSum") -> "SymbolSum":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) - v
        return SymbolSum(self.universe, out)

    def scale(self, n: int) -> "SymbolSum":
        return SymbolSum(self.universe, {k: n * v for k, v in self.coeffs.items()})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        return isinstance(other, SymbolSum) and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        bits = []
        for k in sorted(self.coeffs):
            bits.append(f"{self.coeffs[k]:+d}*{self.universe.describe(k)}")
        return " ".join(bits)


@dataclass(frozen=True)
class RelationColumn:
    kind: str  # "bilinear" | "wr-vertical" | "wr-line"
    data: tuple
    vector: tuple[tuple[int, int], ...]  # sorted sparse (index, coeff)

    def as_dict(self) -> dict[int, int]:
        return dict(self.vector)


def _column(universe: SymbolUniverse, entries: Iterable[tuple[Sequence[Point], int]],
            kind: str, data: tuple) -> RelationColumn:
    acc: dict[int, int] = {}
    for pts, c in entries:
        k = universe.index_of(pts)
        acc[k] = acc.get(k, 0) + c
    vec = tuple(sorted((k, v) for k, v in acc.items() if v))
    return RelationColumn(kind, data, vec)


def bilinear_relations(
    universe: SymbolUniverse, slot: int, dedupe: bool = True
) -> list[RelationColumn]:
    """Columns { ..., a+a', ... } - { ..., a, ... } - { ..., a', ... } for
    every pair (a, a') in the slot and every combination of the other slots.

    The raw family ranges over ordered pairs; with dedupe the (a', a) copy and
    vanishing columns are dropped.
    """
    G = universe.slot_groups[slot]
    others = [
        range(len(g.points)) if i != slot else [0]
        for i, g in enumerate(universe.slot_groups)
    ]
    out = []
    seen = set()
    pts = G.points
    for i, a in enumerate(pts):
        pair_iter = pts if not dedupe else pts[i:]
        for a2 in pair_iter:
            s = G.add(a, a2)
            for combo in iproduct(*others):
                base = [universe.slot_groups[j].points[combo[j]] for j in range(len(combo))]

                def with_slot(x):
                    t = list(base)
                    t[slot] = x
                    return t

                col = _column(
                    universe,
                    [(with_slot(s), 1), (with_slot(a), -1), (with_slot(a2), -1)],
                    "bilinear",
                    (slot, a, a2, tuple(b for j, b in enumerate(base) if j != slot)),
                )
                if not col.vector:
                    continue
                if dedupe:
                    if col.vector in seen:
                        continue
                    seen.add(col.vector)
                out.append(col)
    return out


def _require_pair_slots(universe: SymbolUniverse) -> EllipticGroup:
    if len(universe.slot_groups) < 2:
        raise InvalidConfigurationError("need two enumerated slots")
    g0, g1 = universe.slot_groups[0], universe.slot_groups[1]
    if _curve_key(g0) != _curve_key(g1):
        raise InvalidConfigurationError("first two slots must carry the same curve")
    return g0


def wr_vertical(universe: SymbolUniverse, a: Point) -> RelationColumn:
    """{a,a,X} + {-a,-a,X} - 2{0,0,X}: the reciprocity instance of the
    function x - x(a), whose zeros are a and -a with a double pole at 0."""
    G = _require_pair_slots(universe)
    if a is not None and a not in G.index:
        raise InvalidConfigurationError(f"{a} is not a point of the slot curve")
    rest = [g.points[0] for g in universe.slot_groups[2:]]
    na = G.neg(a)
    return _column(
        universe,
        [
            ([a, a] + rest, 1),
            ([na, na] + rest, 1),
            ([None, None] + rest, -2),
        ],
        "wr-vertical",
        (a,),
    )


def wr_line(
    universe: SymbolUniverse, a1: Point, a2: Point, convention: str = MINUS
) -> RelationColumn:
    """{a1,a1,X} + {a2,a2,X} + {s,s,X} - 3{0,0,X} with s the configured third
    point of the chord through a1 and a2.

    The chord-law value is s = -(a1+a2) (convention "minus"); the alternative
    s = a1+a2 ("plus") is selectable because both routes derive the same
    skew-symmetry targets.
    """
    if convention not in (PLUS, MINUS):
        raise InvalidConfigurationError(f"unknown convention {convention!r}")
    G = _require_pair_slots(universe)
    rest = [g.points[0] for g in universe.slot_groups[2:]]
    total = G.add(a1, a2)
    s = total if convention == PLUS else G.neg(total)
    return _column(
        universe,
        [
            ([a1, a1] + rest, 1),
            ([a2, a2] + rest, 1),
            ([s, s] + rest, 1),
            ([None, None] + rest, -3),
        ],
        "wr-line",
        (a1, a2, s, convention),
    )


# -- membership ------------------------------------------------------------------


class RelationLattice:
    """Integer span of relation columns over a symbol universe."""

    def __init__(self, universe: SymbolUniverse, columns: Sequence[RelationColumn]):
        self.universe = universe
        self.columns = list(columns)
        self.engine = ColumnLattice(universe.dimension)
        for col in self.columns:
            self.engine.add_generator(col.as_dict())

    def __len__(self) -> int:
        return len(self.columns)


@dataclass(frozen=True)
class MembershipResult:
    member: bool
    coefficients: Optional[dict[int, int]]  # column index -> multiplier
    remainder_norm: int  # 0 iff member

    @property
    def certificate_length(self) -> int:
        return len(self.coefficients or {})


def prove_member(target: SymbolSum, lattice: RelationLattice) -> MembershipResult:
    """Certified membership of target in the relation lattice.

    A positive answer carries exact integer multipliers over the columns and
    is re-verified by substitution; a negative answer is certified by the
    nonzero canonical remainder of echelon reduction.
    """
    if not target.universe.same_universe(lattice.universe):
        raise ValueError("target and lattice live on different symbol universes")
    rem, coeffs = lattice.engine.reduce(target.coeffs)
    if any(rem):
        return MembershipResult(False, None, sum(abs(x) for x in rem))
    rebuilt: dict[int, int] = {}
    for ci, mult in coeffs.items():
        for k, v in lattice.columns[ci].vector:
            rebuilt[k] = rebuilt.get(k, 0) + mult * v
    rebuilt = {k: v for k, v in rebuilt.items() if v}
    assert rebuilt == target.coeffs, "certificate failed re-verification"
    return MembershipResult(True, dict(coeffs), 0)


# -- the skew-symmetry prover ------------------------------------------------------


@dataclass
class SkewReport:
    p: int
    curve: tuple
    r: int
    convention: str
    n_points: int
    n_columns: int
    pairs_proved: int
    pairs_failed: list
    two_torsion_proved: int
    two_torsion_failed: list
    negative_control_pair: Optional[tuple]
    negative_control_certified: bool
    certificate_lengths: dict  # pair -> length

    @property
    def all_proved(self) -> bool:
        return not self.pairs_failed and not self.two_torsion_failed

    def to_records(self) -> list[dict]:
        recs = []
        base = {
            "p": self.p,
            "r": self.r,
            "convention": self.convention,
            "generators": self.n_columns,
        }
        for pair, length in self.certificate_lengths.items():
            recs.append(
                dict(
                    base,
                    target=f"skew{pair}",
                    certificate_length=length,
                    status="proved",
                )
            )
        for pair in self.pairs_failed:
            recs.append(dict(base, target=f"skew{pair}", status="not-derivable"))
        recs.append(
            dict(
                base,
                target="negative-control",
                pair=repr(self.negative_control_pair),
                status="certified-non-member"
                if self.negative_control_certified
                else "not-found",
            )
        )
        return recs


def assemble_skew_lattice(
    G: EllipticGroup, r: int, tail: tuple = (), convention: str = MINUS
) -> RelationLattice:
    """Bilinearity on the first two slots plus both reciprocity families, over
    a universe with two enumerated slots and a fixed tail of length r - 2."""
    if r < 2:
        raise InvalidConfigurationError("need r >= 2")
    n = len(G.points)
    if n**r > 10**6:
        raise BudgetExceededError(f"universe size {n}^{r} exceeds the 10^6 contract")
    if len(tail) != r - 2:
        raise InvalidConfigurationError(f"tail must have length {r - 2}")
    universe = SymbolUniverse([G, G], tail)
    cols: list[RelationColumn] = []
    cols.extend(bilinear_relations(universe, 0))
    cols.extend(bilinear_relations(universe, 1))
    seen = set()
    for a in G.points:
        col = wr_vertical(universe, a)
        if col.vector and col.vector not in seen:
            seen.add(col.vector)
            cols.append(col)
    for i, a1 in enumerate(G.points):
        for a2 in G.points[i:]:
            col = wr_line(universe, a1, a2, convention)
            if col.vector and col.vector not in seen:
                seen.add(col.vector)
                cols.append(col)
    return RelationLattice(universe, cols)


def prove_skew(
    G: EllipticGroup, r: int = 2, tail: tuple = (), convention: str = MINUS
) -> SkewReport:
    """Certify {a1,a2,X} + {a2,a1,X} = 0 and 2{a,a,X} = 0 against the
    generated relation lattice, for every ordered pair of E(F_q) points.

    Also locates one pair whose lone symbol {a1,a2,X} is certified to lie
    outside the lattice (so the certified relations are not degenerate).
    """
    lattice = assemble_skew_lattice(G, r, tail, convention)
    universe = lattice.universe
    proved = 0
    failed = []
    lengths = {}
    for a1 in G.points:
        for a2 in G.points:
            target = SymbolSum.symbol(universe, [a1, a2]) + SymbolSum.symbol(
                universe, [a2, a1]
            )
            res = prove_member(target, lattice)
            key = (_pt(a1), _pt(a2))
            if res.member:
                proved += 1
                lengths[key] = res.certificate_length
            else:
                failed.append(key)
    tt_proved = 0
    tt_failed = []
    for a in G.points:
        target = SymbolSum.symbol(universe, [a, a], 2)
        if prove_member(target, lattice).member:
            tt_proved += 1
        else:
            tt_failed.append(_pt(a))
    control_pair = None
    control_ok = False
    for a1 in G.points:
        if a1 is None:
            continue
        for a2 in G.points:
            if a2 is None or a2 == a1:
                continue
            res = prove_member(SymbolSum.symbol(universe, [a1, a2]), lattice)
            if not res.member:
                control_pair = (_pt(a1), _pt(a2))
                control_ok = True
                break
        if control_ok:
            break
    return SkewReport(
        p=G.p,
        curve=(G.a1, G.a2, G.a3, G.a4, G.a6),
        r=r,
        convention=convention,
        n_points=len(G.points),
        n_columns=len(lattice),
        pairs_proved=proved,
        pairs_failed=failed,
        two_torsion_proved=tt_proved,
        two_torsion_failed=tt_failed,
        negative_control_pair=control_pair,
        negative_control_certified=control_ok,
        certificate_lengths=lengths,
    )


def _pt(P: Point):
    return "0" if P is None else P


# -- soundness spot checks ----------------------------------------------------------


def relation_is_instance(universe: SymbolUniverse, col: RelationColumn) -> bool:
    """Independently re-derive the column from its provenance.

    Bilinear columns are rebuilt from the slot group law; reciprocity columns
    are checked against the actual zero set of the generating function on the
    curve (vertical line x - x(a), or the chord through the two points), so a
    column that does not match an honest divisor is rejected.
    """
    G = universe.slot_groups[0]
    rest = [g.points[0] for g in universe.slot_groups[2:]]
    if col.kind == "bilinear":
        slot, a, a2, others = col.data
        Gs = universe.slot_groups[slot]
        s = Gs.add(a, a2)
        base: list[Point] = [None] * len(universe.slot_groups)
        oi = iter(others)
        for j in range(len(universe.slot_groups)):
            if j != slot:
                base[j] = next(oi)

        def with_slot(x):
            t = list(base)
            t[slot] = x
            return t

        want = _column(
            universe,
            [(with_slot(s), 1), (with_slot(a), -1), (with_slot(a2), -1)],
            "", (),
        )
        return want.vector == col.vector
    if col.kind == "wr-vertical":
        (a,) = col.data
        if a is None:
            return col.vector == ()
        zeros = [P for P in G.points if P is not None and P[0] == a[0]]
        if set(zeros) != {a, G.neg(a)}:
            return False
        mult = 2 if a == G.neg(a) else 1
        entries = [([z, z] + rest, mult) for z in sorted(set(zeros))]
        entries.append(([None, None] + rest, -2))
        return _column(universe, entries, "", ()).vector == col.vector
    if col.kind == "wr-line":
        a1, a2, s, convention = col.data
        if convention != MINUS:
            # the alternative sign is a configured variant, not a divisor
            return False
        third = G.neg(G.add(a1, a2))
        if s != third:
            return False
        want = _column(
            universe,
            [
                ([a1, a1] + rest, 1),
                ([a2, a2] + rest, 1),
                ([third, third] + rest, 1),
                ([None, None] + rest, -3),
            ],
            "", (),
        )
        if want.vector != col.vector:
            return False
        return _chord_zero_set_matches(G, a1, a2, third)
    return False


def _chord_zero_set_matches(G: EllipticGroup, a1: Point, a2: Point, third: Point) -> bool:
    """The affine zero set of the chord function must be exactly the nonzero
    members of {a1, a2, third}."""
    pts = [P for P in (a1, a2, third) if P is not None]
    if not pts:
        return True  # constant configuration, nothing to check
    p = G.p
    if len(pts) < 3:
        # vertical line x - x(c) through c and -c
        c = pts[0]
        zeros = {P for P in G.points if P is not None and P[0] == c[0]}
        return zeros == set(pts)
    if a1 != a2:
        if a1[0] == a2[0]:
            # vertical chord: third must be 0, handled above
            return False
        lam = (a2[1] - a1[1]) * pow(a2[0] - a1[0], -1, p) % p
    else:
        den = (2 * a1[1] + G.a1 * a1[0] + G.a3) % p
        if den == 0:
            return False  # tangent at a 2-torsion point is vertical
        lam = (3 * a1[0] ** 2 + 2 * G.a2 * a1[0] + G.a4 - G.a1 * a1[1]) * pow(den, -1, p) % p
    nu = (a1[1] - lam * a1[0]) % p
    zeros = {
        P
        for P in G.points
        if P is not None and (P[1] - lam * P[0] - nu) % p == 0
    }
    return zeros == set(pts)


# -- diagonal map ------------------------------------------------------------------


def phi_r(universe: SymbolUniverse, cycle: Sequence[tuple[Point, int]]) -> SymbolSum:
    """Linear extension of [a] -> {a, a, ..., a} onto the universe's slots.

    Requires a tail-free universe whose slots all carry one curve (the
    diagonal symbol constrains every slot).
    """
    if universe.tail:
        raise InvalidConfigurationError("diagonal symbols need a tail-free universe")
    keys = {_curve_key(g) for g in universe.slot_groups}
    if len(keys) != 1:
        raise InvalidConfigurationError("diagonal symbols need equal slot curves")
    out = SymbolSum(universe)
    nslots = len(universe.slot_groups)
    for pt, mult in cycle:
        out = out + SymbolSum.symbol(universe, [pt] * nslots, mult)
    return out


# -- product decomposition -----------------------------------------------------------


ProductPoint = tuple  # one Point per coordinate curve


def product_zero(d: int) -> ProductPoint:
    return (None,) * d


def embed(i: int, x: Point, d: int) -> ProductPoint:
    t = [None] * d
    t[i] = x
    return tuple(t)


def project(i: int, P: ProductPoint) -> Point:
    return P[i]


def product_add(groups: Sequence[EllipticGroup], P: ProductPoint, Q: ProductPoint) -> ProductPoint:
    return tuple(g.add(x, y) for g, x, y in zip(groups, P, Q))


@dataclass
class DecompositionResult:
    original: tuple[ProductPoint, ...]
    terms: dict[tuple[int, ...], tuple[Point, ...]]  # index tuple -> slot points
    certificate: list[tuple[int, dict]]  # (multiplier, bilinear column dict)
    verified: bool
    roundtrip_ok: bool


def product_decompose(
    groups: Sequence[EllipticGroup], symbol_points: Sequence[ProductPoint]
) -> DecompositionResult:
    """Expand a symbol on a product of curves into coordinate symbols.

    Each slot point decomposes as a sum of its embedded coordinates; slot
    bilinearity expands the symbol into one term per index tuple (terms with a
    zero coordinate vanish).  The emitted certificate lists the bilinear
    columns used, and the decomposition identity is re-checked exactly.
    """
    d = len(groups)
    r = len(symbol_points)
    original = tuple(tuple(P) for P in symbol_points)
    work: dict[tuple[ProductPoint, ...], int] = {original: 1}
    cert: list[tuple[int, dict]] = []

    def col_dict(entries):
        acc: dict[tuple[ProductPoint, ...], int] = {}
        for tup, c in entries:
            acc[tup] = acc.get(tup, 0) + c
        return {k: v for k, v in acc.items() if v}

    for slot in range(r):
        nxt: dict[tuple[ProductPoint, ...], int] = {}
        for tup, coeff in work.items():
            P = tup[slot]
            pieces = [embed(i, P[i], d) for i in range(d)]
            # suffix sums s_k = pieces[k] + ... + pieces[d-1]
            suffix = [pieces[-1]]
            for k in range(d - 2, -1, -1):
                suffix.append(product_add(groups, pieces[k], suffix[-1]))
            suffix.reverse()
            assert suffix[0] == P, "coordinate expansion does not resum"

            def with_slot(x):
                t = list(tup)
                t[slot] = x
                return tuple(t)

            for k in range(d - 1):
                col = col_dict(
                    [
                        (with_slot(suffix[k]), 1),
                        (with_slot(pieces[k]), -1),
                        (with_slot(suffix[k + 1]), -1),
                    ]
                )
                if col:
                    cert.append((coeff, col))
            for piece in pieces:
                key = with_slot(piece)
                nxt[key] = nxt.get(key, 0) + coeff
        work = {k: v for k, v in nxt.items() if v}

    # drop terms with a vanishing coordinate: {..., 0, ...} = 0 is derivable
    # from the bilinear column at (0, 0), which equals -{..., 0, ...}
    zero = product_zero(d)
    final: dict[tuple[ProductPoint, ...], int] = {}
    for tup, coeff in work.items():
        if any(pt == zero for pt in tup):
            slot = next(i for i, pt in enumerate(tup) if pt == zero)
            col = col_dict([(tup, 1), (tup, -1), (tup, -1)])
            cert.append((-coeff, col))
            continue
        final[tup] = final.get(tup, 0) + coeff

    # exact re-verification: original = sum(final) + sum(mult * column)
    check: dict[tuple[ProductPoint, ...], int] = dict(final)
    for mult, col in cert:
        for k, v in col.items():
            check[k] = check.get(k, 0) + mult * v
    check = {k: v for k, v in check.items() if v}
    verified = check == {original: 1}

    terms: dict[tuple[int, ...], tuple[Point, ...]] = {}
    roundtrip = True
    for tup in final:
        idx = []
        comps = []
        for pt in tup:
            nz = [i for i in range(d) if pt[i] is not None]
            if len(nz) != 1:
                roundtrip = False
                break
            i = nz[0]
            x = project(i, pt)
            if embed(i, x, d) != pt:
                roundtrip = False
                break
            idx.append(i)
            comps.append(x)
        else:
            terms[tuple(idx)] = tuple(comps)
            continue
        break
    return DecompositionResult(original, terms, cert, verified, roundtrip)
