"""Coefficient fields: the rationals, prime fields and their quadratic extensions.

Elements are plain Python values so the polynomial kernels can work on them
without wrapper objects:

* ``Rationals``: :class:`fractions.Fraction`
* ``PrimeField(p)``: ``int`` in ``[0, p)``
* ``QuadraticExtension(p, r)``: pair ``(a, b)`` standing for ``a + b*s`` with ``s*s = r``
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterator


class FieldError(ValueError):
    pass


class FieldMismatch(FieldError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def is_square_mod(a: int, p: int) -> bool:
    a %= p
    return a == 0 or pow(a, (p - 1) // 2, p) == 1


def smallest_nonresidue(p: int) -> int:
    for r in range(2, p):
        if not is_square_mod(r, p):
            return r
    raise FieldError(f"no quadratic non-residue mod {p}")


class Field:
    """Interface shared by the three coefficient fields."""

    #: True when elements are Python numbers that may be summed and multiplied
    #: with the built-in operators and brought back to canonical form by
    #: :meth:`reduce`.  The polynomial kernels use this for their fast path.
    native = False
    characteristic = 0

    zero: Any
    one: Any

    def reduce(self, a):
        return a

    def from_int(self, n: int):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return a == self.zero

    def pow(self, a, e: int):
        result = self.one
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def coerce(self, value):
        """Accept ints, Fractions, strings or native elements."""
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, bool):
            raise TypeError("bool is not a field element")
        if isinstance(value, int):
            return self.from_int(value)
        return self.coerce_other(value)

    def coerce_other(self, value):
        raise TypeError(f"cannot coerce {value!r} into {self}")

    def format(self, a) -> str:
        return str(a)

    def parse(self, text: str):
        raise NotImplementedError

    def elements(self) -> Iterator:
        raise FieldError(f"{self} is infinite")

    @property
    def order(self) -> int | None:
        return None

    def to_json(self) -> str:
        return str(self)

    @staticmethod
    def from_json(text: str) -> "Field":
        return parse_field(text)


@dataclass(frozen=True)
class Rationals(Field):
    native = True
    characteristic = 0
    zero = Fraction(0)
    one = Fraction(1)

    def reduce(self, a):
        return a if isinstance(a, Fraction) else Fraction(a)

    def from_int(self, n):
        return Fraction(n)

    def coerce_other(self, value):
        if isinstance(value, Fraction):
            return value
        raise TypeError(f"cannot coerce {value!r} into QQ")

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def format(self, a):
        return str(a)

    def parse(self, text):
        return Fraction(text.strip())

    def __str__(self):
        return "QQ"


@dataclass(frozen=True)
class PrimeField(Field):
    p: int

    native = True

    def __post_init__(self):
        if not is_prime(self.p) or self.p >= 2**31:
            raise FieldError(f"modulus must be a prime below 2^31, got {self.p}")

    @property
    def characteristic(self):
        return self.p

    @property
    def order(self):
        return self.p

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def reduce(self, a):
        return a % self.p

    def from_int(self, n):
        return n % self.p

    def coerce_other(self, value):
        if isinstance(value, Fraction):
            return self.div(value.numerator % self.p, value.denominator % self.p)
        raise TypeError(f"cannot coerce {value!r} into GF({self.p})")

    def add(self, a, b):
        return (a + b) % self.p

    def neg(self, a):
        return -a % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def pow(self, a, e):
        return pow(a, e, self.p)

    def parse(self, text):
        return int(text.strip()) % self.p

    def elements(self):
        return iter(range(self.p))

    def __str__(self):
        return f"GF({self.p})"


@dataclass(frozen=True)
class QuadraticExtension(Field):
    """GF(p^2) presented as GF(p)[s]/(s^2 - r) with r a non-residue."""

    p: int
    r: int

    def __post_init__(self):
        if not is_prime(self.p) or self.p == 2 or self.p >= 2**31:
            raise FieldError(f"modulus must be an odd prime below 2^31, got {self.p}")
        if is_square_mod(self.r, self.p):
            raise FieldError(f"{self.r} is a square mod {self.p}")

    @property
    def characteristic(self):
        return self.p

    @property
    def order(self):
        return self.p * self.p

    @property
    def zero(self):
        return (0, 0)

    @property
    def one(self):
        return (1, 0)

    def from_int(self, n):
        return (n % self.p, 0)

    def coerce_other(self, value):
        if isinstance(value, tuple) and len(value) == 2:
            return (value[0] % self.p, value[1] % self.p)
        if isinstance(value, Fraction):
            base = PrimeField(self.p).coerce(value)
            return (base, 0)
        raise TypeError(f"cannot coerce {value!r} into {self}")

    def add(self, a, b):
        p = self.p
        return ((a[0] + b[0]) % p, (a[1] + b[1]) % p)

    def neg(self, a):
        return (-a[0] % self.p, -a[1] % self.p)

    def sub(self, a, b):
        p = self.p
        return ((a[0] - b[0]) % p, (a[1] - b[1]) % p)

    def mul(self, a, b):
        p = self.p
        return ((a[0] * b[0] + self.r * a[1] * b[1]) % p, (a[0] * b[1] + a[1] * b[0]) % p)

    def inv(self, a):
        p = self.p
        norm = (a[0] * a[0] - self.r * a[1] * a[1]) % p
        if norm == 0:
            raise ZeroDivisionError("inverse of zero")
        n_inv = pow(norm, -1, p)
        return (a[0] * n_inv % p, -a[1] * n_inv % p)

    def format(self, a):
        if a[1] == 0:
            return str(a[0])
        return f"({a[0]}+{a[1]}*s)"

    _ELEMENT = re.compile(r"^\(?\s*(\d+)\s*\+\s*(\d+)\s*\*\s*s\s*\)?$")

    def parse(self, text):
        text = text.strip()
        m = self._ELEMENT.match(text)
        if m:
            return (int(m.group(1)) % self.p, int(m.group(2)) % self.p)
        return (int(text) % self.p, 0)

    def elements(self):
        p = self.p
        return ((a, b) for b in range(p) for a in range(p))

    def __str__(self):
        return f"GF({self.p}^2;r={self.r})"


QQ = Rationals()

_FIELD_RE = re.compile(r"^GF\((\d+)(?:\^2;r=(\d+))?\)$")


def parse_field(text: str) -> Field:
    text = text.strip()
    if text in ("QQ", "Q"):
        return QQ
    m = _FIELD_RE.match(text)
    if not m:
        raise FieldError(f"unrecognized field {text!r}")
    p = int(m.group(1))
    if m.group(2) is None:
        return PrimeField(p)
    return QuadraticExtension(p, int(m.group(2)))


def finite_field(p: int, ext: int = 1) -> Field:
    if ext == 1:
        return PrimeField(p)
    if ext == 2:
        return QuadraticExtension(p, smallest_nonresidue(p))
    raise FieldError(f"extension degree must be 1 or 2, got {ext}")


def check_same(a: Field, b: Field) -> None:
    if a != b:
        raise FieldMismatch(f"{a} != {b}")


def rank(field: Field, rows: list[list]) -> int:
    """Rank of a matrix over ``field`` by Gaussian elimination."""
    m = [list(row) for row in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if not field.is_zero(m[i][c])), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = field.inv(m[r][c])
        for i in range(r + 1, len(m)):
            if field.is_zero(m[i][c]):
                continue
            factor = field.mul(m[i][c], inv)
            m[i] = [field.sub(x, field.mul(factor, y)) for x, y in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r
