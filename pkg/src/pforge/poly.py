"""Sparse exact multivariate polynomials over QQ, GF(p) and GF(p^2).

Monomials are packed into a single Python int: each variable owns a 16-bit
slot, ``x0`` in the most significant exponent slot, and the total degree sits
above all of them.  Multiplying monomials is then integer addition (no slot
can overflow while degrees stay below 2**16), and the natural integer order
of the keys *is* graded lexicographic order with ``x0 > x1 > ...``.
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping, Sequence

from .fields import QQ, Field, FieldMismatch, check_same, parse_field

BITS = 16
MASK = (1 << BITS) - 1


class ArityMismatch(ValueError):
    pass


class NotDivisible(ArithmeticError):
    pass


def pack(exps: Sequence[int]) -> int:
    key = sum(exps)
    if key > MASK or min(exps, default=0) < 0:
        raise ValueError(f"exponent vector out of range: {tuple(exps)}")
    for e in exps:
        key = (key << BITS) | e
    return key


def unpack(key: int, n: int) -> tuple[int, ...]:
    out = [0] * n
    for i in range(n - 1, -1, -1):
        out[i] = key & MASK
        key >>= BITS
    return tuple(out)


def key_degree(key: int, n: int) -> int:
    return key >> (BITS * n)


def _var_unit(i: int, n: int) -> int:
    # packed monomial x_i
    return (1 << (BITS * n)) | (1 << (BITS * (n - 1 - i)))


def _divides(a: int, b: int, n: int) -> bool:
    """True if monomial ``a`` divides monomial ``b``."""
    for _ in range(n):
        if (a & MASK) > (b & MASK):
            return False
        a >>= BITS
        b >>= BITS
    return True


class Polynomial:
    """Immutable sparse polynomial in ``num_vars`` variables over ``field``."""

    __slots__ = ("field", "num_vars", "_terms", "_hash")

    def __init__(self, field: Field, num_vars: int, terms: Mapping | None = None):
        self.field = field
        self.num_vars = num_vars
        self._hash = None
        clean = {}
        if terms:
            for exps, c in terms.items():
                if len(exps) != num_vars:
                    raise ArityMismatch(f"exponent vector {exps} has length != {num_vars}")
                c = field.coerce(c)
                if field.is_zero(c):
                    continue
                key = pack(exps)
                if key in clean:
                    c = field.add(clean[key], c)
                    if field.is_zero(c):
                        del clean[key]
                        continue
                clean[key] = c
        self._terms = clean

    @classmethod
    def _raw(cls, field: Field, num_vars: int, terms: dict) -> "Polynomial":
        # trusted constructor: packed keys, canonical nonzero coefficients
        obj = cls.__new__(cls)
        obj.field = field
        obj.num_vars = num_vars
        obj._terms = terms
        obj._hash = None
        return obj

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, field: Field, num_vars: int) -> "Polynomial":
        return cls._raw(field, num_vars, {})

    @classmethod
    def constant(cls, field: Field, num_vars: int, c) -> "Polynomial":
        c = field.coerce(c)
        if field.is_zero(c):
            return cls.zero(field, num_vars)
        return cls._raw(field, num_vars, {pack((0,) * num_vars): c})

    @classmethod
    def one(cls, field: Field, num_vars: int) -> "Polynomial":
        return cls.constant(field, num_vars, 1)

    @classmethod
    def var(cls, field: Field, num_vars: int, i: int) -> "Polynomial":
        if not 0 <= i < num_vars:
            raise ArityMismatch(f"variable index {i} out of range for {num_vars} variables")
        return cls._raw(field, num_vars, {_var_unit(i, num_vars): field.one})

    @classmethod
    def gens(cls, field: Field, num_vars: int) -> list["Polynomial"]:
        return [cls.var(field, num_vars, i) for i in range(num_vars)]

    @classmethod
    def linear(cls, field: Field, coeffs: Sequence) -> "Polynomial":
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            c = field.coerce(c)
            if not field.is_zero(c):
                terms[_var_unit(i, n)] = c
        return cls._raw(field, n, terms)

    # -- inspection ---------------------------------------------------------

    @property
    def terms(self) -> dict[tuple[int, ...], object]:
        """Exponent vector -> coefficient, in graded-lex order (largest first)."""
        n = self.num_vars
        return {unpack(k, n): self._terms[k] for k in sorted(self._terms, reverse=True)}

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return key_degree(max(self._terms), self.num_vars)

    def is_homogeneous(self) -> bool:
        n = self.num_vars
        return len({key_degree(k, n) for k in self._terms}) <= 1

    def leading_term(self):
        """(exponents, coefficient) of the graded-lex leading term."""
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        k = max(self._terms)
        return unpack(k, self.num_vars), self._terms[k]

    def leading_coefficient(self):
        return self._terms[max(self._terms)]

    def coefficient(self, exps: Sequence[int]):
        return self._terms.get(pack(exps), self.field.zero)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return (
                self.field == other.field
                and self.num_vars == other.num_vars
                and self._terms == other._terms
            )
        if isinstance(other, int) and other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((str(self.field), self.num_vars, frozenset(self._terms.items())))
        return self._hash

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: "Polynomial") -> None:
        check_same(self.field, other.field)
        if self.num_vars != other.num_vars:
            raise ArityMismatch(f"{self.num_vars} vs {other.num_vars} variables")

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial.constant(self.field, self.num_vars, other)

    def __add__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return add(self, other)

    __radd__ = __add__

    def __neg__(self):
        f = self.field
        return Polynomial._raw(f, self.num_vars, {k: f.neg(c) for k, c in self._terms.items()})

    def __sub__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return add(self, -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            return mul(self, other)
        try:
            c = self.field.coerce(other)
        except TypeError:
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        result = Polynomial.one(self.field, self.num_vars)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def scale(self, c) -> "Polynomial":
        f = self.field
        c = f.coerce(c)
        if f.is_zero(c):
            return Polynomial.zero(f, self.num_vars)
        return Polynomial._raw(f, self.num_vars, {k: f.mul(v, c) for k, v in self._terms.items()})

    def monic(self) -> "Polynomial":
        """Scale so the graded-lex leading coefficient is 1 (zero stays zero)."""
        if not self._terms:
            return self
        return self.scale(self.field.inv(self.leading_coefficient()))

    # -- calculus and evaluation --------------------------------------------

    def __call__(self, *point):
        if len(point) == 1 and isinstance(point[0], (list, tuple)) and self.num_vars != 1:
            point = point[0]
        return evaluate(self, point)

    def partial(self, i: int) -> "Polynomial":
        return partial(self, i)

    def substitute(self, images: Sequence["Polynomial"]) -> "Polynomial":
        return substitute(self, images)

    # -- text and JSON ------------------------------------------------------

    def __str__(self):
        return to_text(self)

    def __repr__(self):
        return f"Polynomial({self.field}, {self.num_vars}, {to_text(self)!r})"

    def to_json(self) -> dict:
        f = self.field
        return {
            "field": str(f),
            "num_vars": self.num_vars,
            "terms": [[list(e), f.format(c)] for e, c in self.terms.items()],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Polynomial":
        field = parse_field(data["field"])
        n = int(data["num_vars"])
        terms = {}
        for exps, c in data["terms"]:
            exps = tuple(int(e) for e in exps)
            if exps in terms:
                raise ValueError(f"duplicate monomial {exps}")
            terms[exps] = field.parse(str(c))
        return cls(field, n, terms)


def add(p: Polynomial, q: Polynomial) -> Polynomial:
    p._check(q)
    f = p.field
    if len(p._terms) < len(q._terms):
        p, q = q, p
    out = dict(p._terms)
    if f.native:
        red = f.reduce
        for k, c in q._terms.items():
            v = out.get(k)
            if v is None:
                out[k] = c
            else:
                v = red(v + c)
                if v:
                    out[k] = v
                else:
                    del out[k]
    else:
        for k, c in q._terms.items():
            v = out.get(k)
            if v is None:
                out[k] = c
            else:
                v = f.add(v, c)
                if f.is_zero(v):
                    del out[k]
                else:
                    out[k] = v
    return Polynomial._raw(f, p.num_vars, out)


def mul(p: Polynomial, q: Polynomial) -> Polynomial:
    p._check(q)
    f = p.field
    if not p._terms or not q._terms:
        return Polynomial.zero(f, p.num_vars)
    a, b = p._terms, q._terms
    if len(a) < len(b):
        a, b = b, a
    acc: dict = {}
    get = acc.get
    if f.native:
        # accumulate unreduced, reduce once at the end
        for kb, cb in b.items():
            for ka, ca in a.items():
                k = ka + kb
                acc[k] = get(k, 0) + ca * cb
        red = f.reduce
        out = {}
        for k, v in acc.items():
            v = red(v)
            if v:
                out[k] = v
    else:
        fm, fa = f.mul, f.add
        for kb, cb in b.items():
            for ka, ca in a.items():
                k = ka + kb
                prev = get(k)
                acc[k] = fm(ca, cb) if prev is None else fa(prev, fm(ca, cb))
        out = {k: v for k, v in acc.items() if not f.is_zero(v)}
    return Polynomial._raw(f, p.num_vars, out)


def evaluate(p: Polynomial, point: Sequence):
    n = p.num_vars
    if len(point) != n:
        raise ArityMismatch(f"point has {len(point)} coordinates, expected {n}")
    f = p.field
    xs = [f.coerce(x) for x in point]
    total = f.zero
    cache: dict[tuple[int, int], object] = {}
    for key, c in p._terms.items():
        exps = unpack(key, n)
        term = c
        for i, e in enumerate(exps):
            if e:
                pw = cache.get((i, e))
                if pw is None:
                    pw = cache[(i, e)] = f.pow(xs[i], e)
                term = f.mul(term, pw)
        total = f.add(total, term)
    return total


def partial(p: Polynomial, i: int) -> Polynomial:
    n = p.num_vars
    if not 0 <= i < n:
        raise ArityMismatch(f"variable index {i} out of range for {n} variables")
    f = p.field
    shift = BITS * (n - 1 - i)
    unit = _var_unit(i, n)
    out = {}
    for key, c in p._terms.items():
        e = (key >> shift) & MASK
        if e:
            c2 = f.mul(c, f.from_int(e))
            if not f.is_zero(c2):
                out[key - unit] = c2
    return Polynomial._raw(f, n, out)


def exact_divide(p: Polynomial, q: Polynomial) -> Polynomial:
    """Return ``r`` with ``q * r == p``; raise :class:`NotDivisible` otherwise."""
    p._check(q)
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    f, n = p.field, p.num_vars
    if len(q._terms) == 1:
        ((kq, cq),) = q._terms.items()
        inv = f.inv(cq)
        out = {}
        for k, c in p._terms.items():
            if not _divides(kq, k, n):
                raise NotDivisible(f"{to_text(q)} does not divide a term of the dividend")
            out[k - kq] = f.mul(c, inv)
        return Polynomial._raw(f, n, out)

    lead_q = max(q._terms)
    inv = f.inv(q._terms[lead_q])
    rem = dict(p._terms)
    quot = {}
    while rem:
        lead = max(rem)
        if not _divides(lead_q, lead, n):
            raise NotDivisible("leading term of the remainder is not divisible")
        k = lead - lead_q
        c = f.mul(rem[lead], inv)
        quot[k] = c
        for kq, cq in q._terms.items():
            kk = kq + k
            v = f.sub(rem.get(kk, f.zero), f.mul(c, cq))
            if f.is_zero(v):
                rem.pop(kk, None)
            else:
                rem[kk] = v
    return Polynomial._raw(f, n, quot)


def substitute(p: Polynomial, images: Sequence[Polynomial]) -> Polynomial:
    """Compose: replace ``x_i`` by ``images[i]`` (all in one common ring)."""
    if len(images) != p.num_vars:
        raise ArityMismatch(f"{len(images)} images for {p.num_vars} variables")
    if not images:
        return p
    target = images[0]
    for im in images:
        target._check(im)
    check_same(p.field, target.field)
    f, n = p.field, p.num_vars
    result = Polynomial.zero(f, target.num_vars)
    powers: dict[tuple[int, int], Polynomial] = {}

    def power(i, e):
        if (i, e) not in powers:
            powers[(i, e)] = images[i] if e == 1 else power(i, e - 1) * images[i]
        return powers[(i, e)]

    for key, c in p._terms.items():
        term = Polynomial.constant(f, target.num_vars, c)
        for i, e in enumerate(unpack(key, n)):
            if e:
                term = term * power(i, e)
        result = result + term
    return result


# -- text serialization -------------------------------------------------------


def _monomial_text(exps: Sequence[int]) -> str:
    return "*".join(f"x{i}" if e == 1 else f"x{i}^{e}" for i, e in enumerate(exps) if e)


def to_text(p: Polynomial) -> str:
    if p.is_zero():
        return "0"
    f = p.field
    parts = []
    for exps, c in p.terms.items():
        mono = _monomial_text(exps)
        coeff = f.format(c)
        parts.append(f"{coeff}*{mono}" if mono else coeff)
    return " + ".join(parts)


_FACTOR = re.compile(r"^x(\d+)(?:\^(\d+))?$")


def parse(text: str, field: Field = QQ, num_vars: int | None = None) -> Polynomial:
    """Inverse of :func:`to_text`. Also accepts ``-`` between terms and
    implicit unit coefficients, as in ``x0^2 - x1``."""
    parsed = []
    top = -1
    for sign, chunk in _split_terms(text):
        coeff = field.one if sign > 0 else field.neg(field.one)
        exps: dict[int, int] = {}
        for fac in _split_factors(chunk):
            m = _FACTOR.match(fac)
            if m:
                i = int(m.group(1))
                exps[i] = exps.get(i, 0) + int(m.group(2) or 1)
                top = max(top, i)
            else:
                coeff = field.mul(coeff, field.parse(fac))
        parsed.append((exps, coeff))
    n = top + 1 if num_vars is None else num_vars
    if top >= n:
        raise ArityMismatch(f"variable x{top} in a ring with {n} variables")
    terms: dict = {}
    for exps, c in parsed:
        vec = tuple(exps.get(i, 0) for i in range(n))
        terms[vec] = field.add(terms[vec], c) if vec in terms else c
    return Polynomial(field, n, terms)


def _split_terms(text: str) -> list[tuple[int, str]]:
    # top-level '+' and '-' separate terms; a sign right after '*' or '/'
    # belongs to a coefficient
    out: list[tuple[int, str]] = []
    sign, depth, cur = 1, 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch in "+-":
            body = "".join(cur).strip()
            if body and body[-1] not in "*/":
                out.append((sign, body))
                sign, cur = (1 if ch == "+" else -1), []
                continue
            if not body:
                sign *= 1 if ch == "+" else -1
                continue
        cur.append(ch)
    body = "".join(cur).strip()
    if body:
        out.append((sign, body))
    elif out or text.strip():
        raise ValueError(f"dangling sign in {text!r}")
    return [(sg, b) for sg, b in out if b != "0"]


def _split_factors(chunk: str) -> list[str]:
    # split on '*' that are not inside a parenthesised GF(p^2) element
    out, depth, cur = [], 0, []
    for ch in chunk:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "*" and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return [x.strip() for x in out if x.strip()]


def linear_forms_times_vector(rows: Iterable[Iterable[Polynomial]], vec: Sequence[Polynomial]):
    """Matrix-vector product for polynomial entries."""
    out = []
    for row in rows:
        acc = None
        for a, b in zip(row, vec):
            t = a * b
            acc = t if acc is None else acc + t
        out.append(acc)
    return out


__all__ = [
    "ArityMismatch",
    "FieldMismatch",
    "NotDivisible",
    "Polynomial",
    "add",
    "evaluate",
    "exact_divide",
    "mul",
    "parse",
    "partial",
    "substitute",
    "to_text",
]
