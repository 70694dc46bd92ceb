"""Closed-form numerics for instantons, Pfaffian hypersurfaces and Ulrich bundles.

Everything is exact (:class:`fractions.Fraction`); integrality is checked
where a quantity must be an integer, never assumed.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Sequence

from .steiner import Kind


class NonIntegralResult(ArithmeticError):
    pass


class InconsistentFormula(ArithmeticError):
    pass


class UnsupportedKind(ValueError):
    pass


def _int(x: Fraction, what: str) -> int:
    if x.denominator != 1:
        raise NonIntegralResult(f"{what} = {x} is not an integer")
    return x.numerator


def binomial(top, n: int) -> Fraction:
    """``C(top, n)`` as a polynomial in ``top`` (valid for negative ``top``)."""
    if n < 0:
        return Fraction(0)
    num = Fraction(1)
    for i in range(n):
        num *= top - i
    return num / math.factorial(n)


# -- instanton sheaves -----------------------------------------------------------


def instanton_c1(r: int, d: int) -> Fraction:
    """Coefficient of h in c1 of a rank-r instanton on a degree-d hypersurface."""
    return Fraction(r * (d - 1), 2)


def chi_twist(r: int, k: int, n: int, t: int, d: int) -> int:
    """chi(E(t)) for a rank-r, charge-k instanton with h^n = d."""
    val = (r * d + 2 * k) * binomial(t + n, n) - k * binomial(t + n + 1, n) - k * binomial(t + n - 1, n)
    return _int(val, "chi(E(t))")


def tangent_chern(N: int, d: int) -> tuple[int, int]:
    """(c1, c2) coefficients of the tangent bundle of a degree-d hypersurface in P^N."""
    return N + 1 - d, d * d - (N + 1) * d + math.comb(N + 1, 2)


# -- surfaces cut by sections of rank-2 instantons --------------------------------


@dataclass(frozen=True)
class SurfaceInvariants:
    d: int
    s: int
    k: int
    deg_Y: int
    chi_O_Y: int
    Y_squared: int
    canonical_twist: int

    @property
    def gram_discriminant(self) -> int:
        return self.d * self.Y_squared - self.deg_Y**2

    def to_json(self) -> dict:
        out = asdict(self)
        out["gram_discriminant"] = self.gram_discriminant
        return out


def surface_degree(d: int, s: int, k: int) -> Fraction:
    return d * s * s + d * (d - 1) * s + Fraction(d, 6) * (2 * d * d - 3 * d + 1) + k


def surface_chi(d: int, s: int, k: int) -> Fraction:
    return (
        Fraction(7, 12) * d * s**4
        + Fraction(d, 6) * (10 * d - 25) * s**3
        + Fraction(d, 12) * (22 * d * d - 102 * d + 115) * s**2
        + Fraction(d, 12) * (11 * d**3 - 70 * d * d + 137 * d - 78) * s
        + Fraction(d, 120) * (22 * d**4 - 175 * d**3 + 460 * d * d - 425 * d + 118)
        + Fraction(k, 2) * (s * s + (2 * d - 7) * s + d * d - 7 * d + 12)
    )


def surface_self_intersection(d: int, s: int, k: int) -> Fraction:
    return (
        d * s**4
        + 2 * d * (d - 1) * s**3
        + Fraction(d, 3) * (5 * d * d - 9 * d + 4) * s * s
        + Fraction(d, 3) * (2 * d**3 - 5 * d * d + 4 * d - 1) * s
        + Fraction(d, 30) * (4 * d**4 - 10 * d**3 + 10 * d * d - 5 * d + 1)
        + k * (2 * s * s + 2 * (d - 1) * s + d * d - d - 1)
    )


def surface_invariants(d: int, s: int, k: int) -> SurfaceInvariants:
    if d < 2:
        raise ValueError(f"degree must be at least 2, got {d}")
    return SurfaceInvariants(
        d=d,
        s=s,
        k=k,
        deg_Y=_int(surface_degree(d, s, k), "deg(Y)"),
        chi_O_Y=_int(surface_chi(d, s, k), "chi(O_Y)"),
        Y_squared=_int(surface_self_intersection(d, s, k), "Y^2"),
        canonical_twist=2 * d + 2 * s - 7,
    )


# -- charge bound -------------------------------------------------------------------


def charge_discriminant(d: int, k: int) -> int:
    """180 times the Gram discriminant of (h^2, Y) at s = k."""
    return 4 * d**6 - 5 * d**4 + d * d + 60 * d * (d * d - 4) * k - 180 * k * k


def charge_bound(d: int) -> int:
    """Largest k >= 0 with ``charge_discriminant(d, k) >= 0``."""
    if d < 2:
        raise ValueError(f"degree must be at least 2, got {d}")
    b = 60 * d * (d * d - 4)
    c = 4 * d**6 - 5 * d**4 + d * d
    # roots of -180 k^2 + b k + c: (b +- sqrt(b^2 + 720 c)) / 360
    k = (b + math.isqrt(b * b + 720 * c)) // 360
    while charge_discriminant(d, k + 1) >= 0:
        k += 1
    while k > 0 and charge_discriminant(d, k) < 0:
        k -= 1
    return k


@dataclass(frozen=True)
class CompleteIntersectionCheck:
    k: int
    lam: Fraction
    is_ci_compatible: bool

    def to_json(self) -> dict:
        return {"k": self.k, "lambda": str(self.lam), "is_ci_compatible": self.is_ci_compatible}


def ci_class_check(k: int) -> CompleteIntersectionCheck:
    """Could ``Y`` be ``lambda h^2`` on a cubic fourfold?  Needs ``lambda``
    integral and ``-k^2 + 5k + 14 = 0``."""
    lam = Fraction(3 * k * k + 7 * k + 5, 3)
    ok = lam.denominator == 1 and -k * k + 5 * k + 14 == 0
    return CompleteIntersectionCheck(k, lam, ok)


# -- lattice reports ------------------------------------------------------------------


@dataclass(frozen=True)
class LatticeReport:
    d: int
    h2Y: int
    Y2: int
    delta: int
    source: str

    def to_json(self) -> dict:
        return asdict(self)


def gram_discriminant(d: int, h2Y: int, Y2: int) -> int:
    """Determinant of [[h^4, h^2 Y], [h^2 Y, Y^2]] with h^4 = d."""
    return d * Y2 - h2Y * h2Y


def lattice_report(d: int, s: int, k: int) -> LatticeReport:
    inv = surface_invariants(d, s, k)
    return LatticeReport(d, inv.deg_Y, inv.Y_squared, gram_discriminant(d, inv.deg_Y, inv.Y_squared), "surface")


# -- Pfaffian-type discriminant ---------------------------------------------------------


@dataclass(frozen=True)
class PfaffianTypeParams:
    half_rank: int
    twist: int
    chern: tuple[int, int, int, int, int]
    d: int

    def __post_init__(self):
        if self.half_rank < 1:
            raise ValueError("half_rank must be positive")
        if len(self.chern) != 5:
            raise ValueError("need five Chern coefficients e1..e5")


@dataclass(frozen=True)
class PfaffianDiscriminant:
    c2_h2: int
    c2_sq: int
    delta: int

    def to_json(self) -> dict:
        return asdict(self)


def pfaffian_discriminant(params: PfaffianTypeParams) -> PfaffianDiscriminant:
    """Discriminant of the lattice spanned by h^2 and c2 of the cokernel sheaf
    of a skew map F(-l) -> F^dual, where c_i(F) = e_i h^i and rk F = 2r."""
    r, l, d = params.half_rank, params.twist, params.d
    _, e2, e3, e4, e5 = (Fraction(e) for e in params.chern)
    F = Fraction

    u = (F(1, 6) * r * (r - 1) * (2 * r - 1) * l**3, -r * (r - 1) * l**2, (r - 1) * l)
    c2_h2 = sum(u[i] * d**i for i in range(3)) + (d + l - l * r) * e2 + e3

    v = (
        F(-1, 30) * r * (r - 1) * (2 * r - 1) * (3 * r * r - 3 * r - 1) * l**5,
        F(1, 6) * r * (r - 1) * (6 * r * r - 8 * r + 1) * l**4,
        F(-1, 6) * r * (r - 1) * (10 * r - 11) * l**3,
        (r - 1) ** 2 * l**2,
    )
    w = {
        (2,): (2 * d * d * (r - 1) - d * (r - 1) * (3 * r - 2) * l + r * (r - 1) ** 2 * l * l) * l,
        (3,): ((2 * r - 3) * d - (r - 1) ** 2 * l) * l,
        (4,): l * r - d - 2 * l,
        (5,): -1,
        (2, 2): -l * r + d + l,
        (2, 3): 1,
    }
    a = (
        F(-1, 36) * r * r * (r - 1) ** 2 * (2 * r - 1) ** 2 * l**6,
        F(1, 30) * r * (r - 1) * (2 * r - 1) * (7 * r * r - 7 * r + 1) * l**5,
        F(-1, 6) * r * (r - 1) * (2 * r - 1) ** 2 * l**4,
        F(1, 6) * r * (r - 1) * (2 * r - 1) * l**3,
    )
    b = {
        (2,): F(1, 3) * r * (r - 1) * (l * r - d - l) * (2 * l * r - 3 * d - l) * l * l,
        # l^3 in the first term keeps delta weighted-homogeneous of degree 6
        (3,): F(-1, 3) * (r * (r - 1) * (2 * r - 1) * l**3 + 3 * d * (d + l - l * r * r) * l),
        (4,): d * (l * r - d - 2 * l),
        (5,): -d,
        (2, 2): -(r - 1) * (l * r - d - l) * l,
        (2, 3): 2 * l * r - d - 2 * l,
        (3, 3): -1,
    }
    e = {2: e2, 3: e3, 4: e4, 5: e5}

    def e_of(multiset: Sequence[int]) -> Fraction:
        out = Fraction(1)
        for i in multiset:
            out *= e[i]
        return out

    # multisets absent from the tables have coefficient 0
    c2_sq = sum(v[j] * d**j for j in range(4)) + sum(c * e_of(I) for I, c in w.items())
    delta = sum(a[j] * d**j for j in range(4)) + sum(c * e_of(I) for I, c in b.items())

    c2_h2_i = _int(c2_h2, "c2.h^2")
    c2_sq_i = _int(c2_sq, "c2^2")
    delta_i = _int(delta, "delta")
    if delta_i != gram_discriminant(d, c2_h2_i, c2_sq_i):
        raise InconsistentFormula(
            f"delta = {delta_i} but d*c2^2 - (c2.h^2)^2 = {gram_discriminant(d, c2_h2_i, c2_sq_i)}"
        )
    return PfaffianDiscriminant(c2_h2_i, c2_sq_i, delta_i)


def linear_pfaffian_delta(d: int) -> Fraction:
    return Fraction(d * d * (d * d - 1) * (4 * d * d - 1), 180)


# -- Chern classes of the Steiner bundles on P^5 -----------------------------------------

_TRUNC = 6  # work modulo h^6 on P^5


def series_mul(a: Sequence[int], b: Sequence[int], n: int = _TRUNC) -> list[int]:
    out = [0] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j, y in enumerate(b[: n - i]):
                out[i + j] += x * y
    return out


def series_pow(a: Sequence[int], e: int, n: int = _TRUNC) -> list[int]:
    out = [1] + [0] * (n - 1)
    for _ in range(e):
        out = series_mul(out, a, n)
    return out


def twist_chern(c: Sequence[int], rk: int, t: int, n: int = _TRUNC) -> list[int]:
    """Total Chern class of E(t) from that of E (rank ``rk``), coefficients of h^i."""
    out = [0] * n
    for k in range(n):
        out[k] = sum(math.comb(rk - i, k - i) * c[i] * t ** (k - i) for i in range(min(k, rk) + 1) if i < len(c))
    return out


def tangent_p5_chern() -> list[int]:
    """c(T_{P^5}) = (1 + h)^6 mod h^6."""
    return series_pow([1, 1], 6)


def chern_of_steiner(kind: Kind | str, degree: int = 3) -> tuple[int, int, int, int, int]:
    """(e1..e5) with c_i(F) = e_i h^i for the bundle F of a presentation kind on P^5."""
    kind = Kind(kind)
    if kind is Kind.LINEAR_PFAFFIAN:
        return (0, 0, 0, 0, 0)
    t_minus_1 = twist_chern(tangent_p5_chern(), 5, -1)
    if kind is Kind.COBLE_RESTRICTION:
        total = t_minus_1  # O^3 contributes 1
    elif kind is Kind.TWO_TANGENT:
        total = series_mul(t_minus_1, t_minus_1)
    else:
        raise UnsupportedKind(f"{kind.value} does not live on P^5")
    return tuple(total[1:6])


def steiner_params(kind: Kind | str, degree: int = 3, twist: int = 1) -> PfaffianTypeParams:
    kind = Kind(kind)
    half = {Kind.LINEAR_PFAFFIAN: degree, Kind.COBLE_RESTRICTION: 4, Kind.TWO_TANGENT: 5}.get(kind)
    if half is None:
        raise UnsupportedKind(f"{kind.value} does not live on P^5")
    e = chern_of_steiner(kind, degree)
    d = half * twist - e[0]
    return PfaffianTypeParams(half, twist, e, d)


# -- Ulrich bundles on cubic fourfolds ----------------------------------------------------


@dataclass(frozen=True)
class UlrichNumerics:
    r: int
    a: int
    m: Fraction
    delta: Fraction
    c3_coefficient: Fraction
    c4: Fraction

    @property
    def c4_integral(self) -> bool:
        return self.c4.denominator == 1

    @property
    def delta_applies(self) -> bool:
        """The Hassett-divisor statement needs r prime to 3."""
        return self.r % 3 != 0

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "a": self.a,
            "m": str(self.m),
            "delta": str(self.delta),
            "c3_coefficient": str(self.c3_coefficient),
            "c4": str(self.c4),
            "c4_integral": self.c4_integral,
            "delta_applies": self.delta_applies,
        }


def ulrich_numerics(r: int, a: int) -> UlrichNumerics:
    if r < 1:
        raise ValueError("rank must be positive")
    m = 2 + Fraction(r * r * (3 * r * r - 2 * r + 3), 4) - a
    delta = -Fraction(r * r * (3 * r - 1) ** 2, 4) + 3 * a
    c3 = Fraction(r * (r + 1) * (r - 2), 6)
    c4 = Fraction(-r * (r**3 + 4 * r - 3) * 3 + 6 * a, 12)
    return UlrichNumerics(r, a, m, delta, c3, c4)


def enumerate_table1(ranks: Sequence[int] = (2, 3, 4, 5), min_delta: int = 8) -> list[tuple[int, int, int]]:
    """Candidate (r, delta, m) for Ulrich bundles of rank r on a cubic fourfold.

    Constraints: m >= 0, delta >= min_delta, c4 integral, and c_i = 0 above
    the rank (c3 for r < 3, c4 for r < 4).
    """
    rows = []
    for r in ranks:
        base = ulrich_numerics(r, 0)
        a_max = math.floor(base.m)  # m = base.m - a >= 0
        a_min = math.ceil((min_delta - base.delta) / 3)  # delta = base.delta + 3a
        for a in range(a_min, a_max + 1):
            u = ulrich_numerics(r, a)
            if not u.c4_integral:
                continue
            if r < 4 and u.c4 != 0:
                continue
            if r < 3 and u.c3_coefficient != 0:
                continue
            rows.append((r, _int(u.delta, "delta"), _int(u.m, "m")))
    return rows


def table2(d: int = 3, kmax: int | None = None) -> list[tuple[int, int, int, int]]:
    """(k, delta, h^2 Y, Y^2) for rank-2 instantons of charge k, s = k."""
    kmax = charge_bound(d) if kmax is None else kmax
    rows = []
    for k in range(kmax + 1):
        inv = surface_invariants(d, k, k)
        rows.append((k, gram_discriminant(d, inv.deg_Y, inv.Y_squared), inv.deg_Y, inv.Y_squared))
    return rows


def pfaffian_locus_dimension(d: int) -> dict[str, int]:
    if d < 3:
        raise ValueError(f"degree must be at least 3, got {d}")
    return {
        "matrix_space": 12 * d * d - 6 * d,
        "locus": 8 * d * d - 6 * d,
        "cubics": math.comb(d + 5, 5) - 1,
    }


# -- TSV emission --------------------------------------------------------------------------


def _cell(v) -> str:
    return str(_int(Fraction(v), "table cell"))


def table1_tsv(rows=None) -> str:
    rows = enumerate_table1() if rows is None else rows
    lines = ["r\tdelta\tm"] + ["\t".join(_cell(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def table2_tsv(rows=None) -> str:
    rows = table2() if rows is None else rows
    lines = ["k\tdelta\th2Y\tY2"] + ["\t".join(_cell(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"
