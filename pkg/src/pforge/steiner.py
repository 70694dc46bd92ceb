"""Skew matrices of linear forms built from alternating 3-forms, and the
Pfaffian (or sub-Pfaffian quotient) hypersurfaces they define.

Four presentation kinds are supported:

=====================  ============  ==========  ================
kind                   matrix size   variables   kernel covectors
=====================  ============  ==========  ================
``linear-pfaffian``    2d            6           none
``coble-full``         9             9           x
``coble-restriction``  9             6           (x, 0, 0, 0)
``two-tangent``        12            6           (x, 0), (0, x)
=====================  ============  ==========  ================

For a presentation with kernel vectors the hypersurface is recovered from a
sub-Pfaffian.  With one kernel vector ``v`` (odd size) every
``Pf(M without i)`` equals ``(-1)^i v_i C``; with two kernel vectors ``u, v``
every ``Pf(M without a, b)`` equals ``(-1)^(a+b+1) (u_a v_b - u_b v_a) C``.
Dividing out the known factor gives ``C``.  Forms are normalized so their
leading graded-lex coefficient is 1.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field as dc_field
from typing import Any, Mapping, Sequence

from .fields import Field, parse_field, rank
from .pfaffian import PolyRing, SkewMatrix, engine, pfaffian, sub_pfaffian
from .poly import NotDivisible, Polynomial, exact_divide


class ShapeMismatch(ValueError):
    pass


class DegenerateInstance(ArithmeticError):
    pass


class RankDeficient(ValueError):
    pass


class Kind(enum.Enum):
    LINEAR_PFAFFIAN = "linear-pfaffian"
    COBLE_FULL = "coble-full"
    COBLE_RESTRICTION = "coble-restriction"
    TWO_TANGENT = "two-tangent"

    @property
    def num_vars(self) -> int:
        return 9 if self is Kind.COBLE_FULL else 6

    @property
    def corank(self) -> int:
        return {
            Kind.LINEAR_PFAFFIAN: 0,
            Kind.COBLE_FULL: 1,
            Kind.COBLE_RESTRICTION: 1,
            Kind.TWO_TANGENT: 2,
        }[self]

    def matrix_size(self, degree: int = 3) -> int:
        if self is Kind.LINEAR_PFAFFIAN:
            return 2 * degree
        return 12 if self is Kind.TWO_TANGENT else 9

    def expected_degree(self, degree: int = 3) -> int:
        return degree if self is Kind.LINEAR_PFAFFIAN else 3


# -- alternating 3-forms ------------------------------------------------------


def _sort_sign(i: int, j: int, k: int) -> tuple[int, tuple[int, int, int]]:
    """Sign of the permutation sorting (i, j, k), and the sorted triple."""
    if i == j or j == k or i == k:
        return 0, (i, j, k)
    sign = 1
    a = [i, j, k]
    for x in range(2):
        for y in range(2 - x):
            if a[y] > a[y + 1]:
                a[y], a[y + 1] = a[y + 1], a[y]
                sign = -sign
    return sign, (a[0], a[1], a[2])


@dataclass(frozen=True)
class AlternatingThreeForm:
    field: Field
    num_vars: int
    coeffs: Mapping[tuple[int, int, int], Any] = dc_field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for t, c in self.coeffs.items():
            t = tuple(t)
            if not (len(t) == 3 and 0 <= t[0] < t[1] < t[2] < self.num_vars):
                raise ShapeMismatch(f"triple {t} is not strictly increasing in range {self.num_vars}")
            c = self.field.coerce(c)
            if not self.field.is_zero(c):
                clean[t] = c
        object.__setattr__(self, "coeffs", clean)

    def value(self, i: int, j: int, k: int):
        """omega(e_i, e_j, e_k), fully antisymmetric."""
        sign, t = _sort_sign(i, j, k)
        f = self.field
        if sign == 0:
            return f.zero
        c = self.coeffs.get(t, f.zero)
        return c if sign > 0 else f.neg(c)

    @staticmethod
    def triples(n: int):
        return itertools.combinations(range(n), 3)

    @classmethod
    def random(cls, field: Field, num_vars: int, rng) -> "AlternatingThreeForm":
        return cls(field, num_vars, {t: rng.element(field) for t in cls.triples(num_vars)})

    def to_json(self) -> dict:
        return {
            "field": str(self.field),
            "num_vars": self.num_vars,
            "coeffs": [[list(t), self.field.format(c)] for t, c in sorted(self.coeffs.items())],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "AlternatingThreeForm":
        f = parse_field(data["field"])
        return cls(f, int(data["num_vars"]), {tuple(t): f.parse(str(c)) for t, c in data["coeffs"]})


def contraction_matrix(omega: AlternatingThreeForm, num_vars: int | None = None) -> SkewMatrix:
    """``M(x)_ij = sum_k omega(e_k, e_i, e_j) x_k`` for ``k < num_vars``.

    With ``num_vars`` smaller than the form's dimension this is the contraction
    restricted to the coordinate subspace ``x_k = 0`` for ``k >= num_vars``.
    """
    n = omega.num_vars
    nv = n if num_vars is None else num_vars
    f = omega.field
    ring = PolyRing(f, nv)
    upper: dict[tuple[int, int], list] = {}
    for (a, b, c), w in omega.coeffs.items():
        # omega(k, i, j) for the three ways to pick the contracted slot
        for k, i, j, sgn in ((a, b, c, 1), (b, a, c, -1), (c, a, b, 1)):
            if k >= nv:
                continue
            row = upper.setdefault((i, j), [f.zero] * nv)
            row[k] = f.add(row[k], w if sgn > 0 else f.neg(w))
    entries = {ij: Polynomial.linear(f, coeffs) for ij, coeffs in upper.items()}
    return SkewMatrix(n, ring, entries)


# -- presentations ----------------------------------------------------------------


@dataclass(frozen=True)
class SkewPresentation:
    kind: Kind
    matrix: SkewMatrix
    kernels: tuple[tuple[Polynomial, ...], ...]
    degree: int = 3
    components: tuple = ()

    @property
    def field(self) -> Field:
        return self.matrix.ring.field

    @property
    def num_vars(self) -> int:
        return self.matrix.ring.num_vars

    def kernels_annihilated(self) -> bool:
        return all(all(p.is_zero() for p in self.matrix.apply(list(v))) for v in self.kernels)

    def is_block_degenerate(self) -> bool:
        """A row of the matrix is identically zero (forces extra corank)."""
        m = self.matrix
        return any(all(m.entry(i, j).is_zero() for j in range(m.size)) for i in range(m.size))


@dataclass(frozen=True)
class CubicInstance:
    form: Polynomial
    kind: Kind
    degree: int
    provenance: dict = dc_field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "degree": self.degree,
            "form": self.form.to_json(),
            "text": str(self.form),
            "provenance": dict(self.provenance),
        }


def _padded_x(field: Field, nv: int, size: int, offset: int = 0) -> tuple[Polynomial, ...]:
    zero = Polynomial.zero(field, nv)
    xs = Polynomial.gens(field, nv)
    vec = [zero] * size
    for i in range(nv):
        vec[offset + i] = xs[i]
    return tuple(vec)


def assemble(kind: Kind | str, data, degree: int = 3) -> SkewPresentation:
    """Build the skew presentation for ``kind`` from its raw data.

    * linear-pfaffian: a :class:`SkewMatrix` of linear forms of size 2d in 6
      variables, or a mapping ``(i, j) -> linear form``.
    * coble-full / coble-restriction: one 3-form in 9 variables.
    * two-tangent: three 3-forms in 6 variables, blocks ((M1, M2), (M2, M3)).
    """
    kind = Kind(kind)
    if kind is Kind.LINEAR_PFAFFIAN:
        if isinstance(data, SkewMatrix):
            m = data
        else:
            entries = dict(data)
            if not entries:
                raise ShapeMismatch("no entries given")
            sample = next(iter(entries.values()))
            m = SkewMatrix(2 * degree, PolyRing(sample.field, sample.num_vars), entries)
        if m.size != 2 * degree or not isinstance(m.ring, PolyRing) or m.ring.num_vars != 6:
            raise ShapeMismatch(f"expected a {2 * degree}x{2 * degree} matrix of forms in 6 variables")
        for v in m.upper.values():
            if v.degree() != 1 or not v.is_homogeneous():
                raise ShapeMismatch(f"entry {v} is not a linear form")
        return SkewPresentation(kind, m, (), degree)

    if kind in (Kind.COBLE_FULL, Kind.COBLE_RESTRICTION):
        omega = data[0] if isinstance(data, (list, tuple)) else data
        if not isinstance(omega, AlternatingThreeForm) or omega.num_vars != 9:
            raise ShapeMismatch("expected one alternating 3-form in 9 variables")
        if kind is Kind.COBLE_FULL:
            m = contraction_matrix(omega)
            kernels = (_padded_x(omega.field, 9, 9),)
        else:
            m = contraction_matrix(omega, num_vars=6)
            kernels = (_padded_x(omega.field, 6, 9),)
        return SkewPresentation(kind, m, kernels, 3, (omega,))

    forms = list(data)
    if len(forms) != 3 or any(
        not isinstance(w, AlternatingThreeForm) or w.num_vars != 6 for w in forms
    ):
        raise ShapeMismatch("two-tangent needs three alternating 3-forms in 6 variables")
    f = forms[0].field
    if any(w.field != f for w in forms):
        raise ShapeMismatch("3-forms over different fields")
    m1, m2, m3 = (contraction_matrix(w) for w in forms)
    upper = {}
    for (i, j), v in m1.upper.items():
        upper[(i, j)] = v
    for (i, j), v in m3.upper.items():
        upper[(6 + i, 6 + j)] = v
    # upper-right block is M2; lower-left is then -M2^T = M2
    for i in range(6):
        for j in range(6):
            e = m2.entry(i, j)
            if not e.is_zero():
                upper[(i, 6 + j)] = e
    m = SkewMatrix(12, PolyRing(f, 6), upper)
    kernels = (_padded_x(f, 6, 12, 0), _padded_x(f, 6, 12, 6))
    return SkewPresentation(kind, m, kernels, 3, tuple(forms))


# -- extraction ------------------------------------------------------------------------


def index_choices(p: SkewPresentation) -> list[tuple[int, ...]]:
    """Removable index sets whose kernel cofactor is a nonzero form, in order."""
    if p.kind.corank == 0:
        return []
    size = p.matrix.size
    if p.kind.corank == 1:
        (v,) = p.kernels
        return [(i,) for i in range(size) if not v[i].is_zero()]
    u, v = p.kernels
    return [
        (a, b)
        for a, b in itertools.combinations(range(size), 2)
        if not (u[a] * v[b] - u[b] * v[a]).is_zero()
    ]


def _cofactor(p: SkewPresentation, idx: tuple[int, ...]) -> tuple[int, Polynomial]:
    if len(idx) == 1:
        (i,) = idx
        return (-1) ** i, p.kernels[0][i]
    a, b = idx
    u, v = p.kernels
    return (-1) ** (a + b + 1), u[a] * v[b] - u[b] * v[a]


def cofactor_form(p: SkewPresentation, idx: Sequence[int], eng=None) -> Polynomial:
    """Unnormalized form ``C`` with ``Pf(M without idx) = sign * cofactor * C``."""
    idx = tuple(sorted(idx))
    sign, divisor = _cofactor(p, idx)
    if divisor.is_zero():
        raise DegenerateInstance(f"kernel cofactor vanishes for removed indices {idx}")
    sub = sub_pfaffian(p.matrix, idx, eng)
    if sub.is_zero():
        raise DegenerateInstance(f"sub-Pfaffian without {idx} vanishes identically")
    try:
        q = exact_divide(sub, divisor)
    except NotDivisible as exc:
        raise DegenerateInstance(f"sub-Pfaffian without {idx} is not divisible by its cofactor") from exc
    return q if sign > 0 else -q


def extract_cubic(p: SkewPresentation, index: Sequence[int] | None = None, check: bool = True) -> CubicInstance:
    """Recover the normalized hypersurface equation of a presentation.

    ``index`` overrides the default removed-index choice (the smallest valid
    one); with ``check`` the result is recomputed from the next valid choice
    and both must agree.
    """
    expected = p.kind.expected_degree(p.degree)
    prov: dict[str, Any] = {"field": str(p.field)}
    if p.kind.corank == 0:
        raw = pfaffian(p.matrix)
        if raw.is_zero():
            raise DegenerateInstance("Pfaffian vanishes identically")
        form = raw.monic()
        if check:
            # second route: expand along the last row instead of the first
            rev = p.matrix.principal(list(range(p.matrix.size - 1, -1, -1)))
            if pfaffian(rev).monic() != form:
                raise DegenerateInstance("Pfaffian differs between expansion orders")
            prov["check"] = "reversed-order expansion"
    else:
        choices = index_choices(p)
        if index is not None:
            first = tuple(sorted(index))
            if first not in choices:
                raise DegenerateInstance(f"removed indices {first} have a zero kernel cofactor")
            rest = [c for c in choices if c != first]
        else:
            if not choices:
                raise DegenerateInstance("no removable index with nonzero kernel cofactor")
            first, rest = choices[0], choices[1:]
        eng = engine(p.matrix)
        raw = cofactor_form(p, first, eng)
        form = raw.monic()
        prov["index"] = list(first)
        if check:
            if not rest:
                raise DegenerateInstance("no second index choice for the consistency check")
            second = rest[0]
            if cofactor_form(p, second, eng) != raw:
                raise DegenerateInstance(f"extraction disagrees between {first} and {second}")
            prov["check_index"] = list(second)
    if form.degree() != expected or not form.is_homogeneous():
        raise DegenerateInstance(f"extracted form has degree {form.degree()}, expected {expected}")
    return CubicInstance(form, p.kind, expected, prov)


# -- Coble lift and linear sections -----------------------------------------------


def lift_to_coble(p: SkewPresentation, lam) -> AlternatingThreeForm:
    """The 3-form ``omega(lam)`` on 9 variables whose contraction, restricted
    to ``x6 = x7 = x8 = 0``, is ``p.matrix``; ``lam`` is its ``(6, 7, 8)``
    coefficient, the only one the restriction cannot see.
    """
    m = p.matrix
    if m.size != 9 or not isinstance(m.ring, PolyRing) or m.ring.num_vars != 6:
        raise ShapeMismatch("expected a 9x9 matrix of linear forms in 6 variables")
    f = m.ring.field
    coeffs = {}
    for a, b, c in AlternatingThreeForm.triples(9):
        if a < 6:
            exps = tuple(1 if t == a else 0 for t in range(6))
            coeffs[(a, b, c)] = m.entry(b, c).coefficient(exps)
    coeffs[(6, 7, 8)] = f.coerce(lam)
    omega = AlternatingThreeForm(f, 9, coeffs)
    back = contraction_matrix(omega, num_vars=6)
    if back.upper != m.upper:
        raise ShapeMismatch("matrix is not the restricted contraction of any 3-form")
    return omega


def linear_section(c: CubicInstance | Polynomial, embedding: Sequence[Sequence]) -> Polynomial:
    """Pull a form back along ``x_i = sum_j embedding[i][j] y_j`` and normalize."""
    form = c.form if isinstance(c, CubicInstance) else c
    f = form.field
    rows = [[f.coerce(v) for v in row] for row in embedding]
    if len(rows) != form.num_vars or any(len(r) != len(rows[0]) for r in rows):
        raise ShapeMismatch(f"embedding must have {form.num_vars} rows of equal length")
    ncols = len(rows[0])
    if rank(f, rows) != ncols:
        raise RankDeficient(f"embedding has rank below {ncols}")
    images = [Polynomial.linear(f, row) for row in rows]
    return form.substitute(images).monic()


def coordinate_embedding(field: Field, n: int = 9, m: int = 6) -> list[list]:
    return [[field.one if i == j else field.zero for j in range(m)] for i in range(n)]


# -- random data ------------------------------------------------------------------


def random_data(kind: Kind | str, field: Field, rng, degree: int = 3):
    kind = Kind(kind)
    if kind is Kind.LINEAR_PFAFFIAN:
        size = 2 * degree
        entries = {}
        for i, j in itertools.combinations(range(size), 2):
            entries[(i, j)] = Polynomial.linear(field, rng.elements(field, 6))
        return SkewMatrix(size, PolyRing(field, 6), entries)
    if kind in (Kind.COBLE_FULL, Kind.COBLE_RESTRICTION):
        return AlternatingThreeForm.random(field, 9, rng)
    return [AlternatingThreeForm.random(field, 6, rng) for _ in range(3)]


def random_presentation(kind: Kind | str, field: Field, rng, degree: int = 3) -> SkewPresentation:
    return assemble(kind, random_data(kind, field, rng, degree), degree)
