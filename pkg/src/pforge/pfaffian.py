"""Pfaffians, sub-Pfaffians and kernel vectors of skew-symmetric matrices.

The engine only needs add, mul, negate and a zero test, so the same code
serves field scalars and :class:`~pforge.poly.Polynomial` entries; see
:class:`ScalarRing` and :class:`PolyRing`.

Sign convention: ``Pf([[0, a], [-a, 0]]) = a`` and first-row expansion

    Pf(M) = sum_j (-1)^j a_{1j} Pf(M without rows/cols 1, j)     (1-based j)
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Any, Callable, Iterable, Mapping, Sequence

from .fields import Field, parse_field
from .poly import Polynomial, parse as parse_poly, to_text


class OddSize(ValueError):
    pass


class EvenSize(ValueError):
    pass


class ParityError(ValueError):
    pass


# -- rings ---------------------------------------------------------------------


@dataclass(frozen=True)
class ScalarRing:
    field: Field

    @property
    def zero(self):
        return self.field.zero

    @property
    def one(self):
        return self.field.one

    def add(self, a, b):
        return self.field.add(a, b)

    def mul(self, a, b):
        return self.field.mul(a, b)

    def neg(self, a):
        return self.field.neg(a)

    def is_zero(self, a):
        return self.field.is_zero(a)

    def coerce(self, a):
        return self.field.coerce(a)

    def serialize(self, a) -> str:
        return self.field.format(a)

    def deserialize(self, text: str):
        return self.field.parse(str(text))

    def tag(self) -> str:
        return str(self.field)


@dataclass(frozen=True)
class PolyRing:
    field: Field
    num_vars: int

    @property
    def zero(self):
        return Polynomial.zero(self.field, self.num_vars)

    @property
    def one(self):
        return Polynomial.one(self.field, self.num_vars)

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def is_zero(self, a):
        return a.is_zero()

    def coerce(self, a):
        if isinstance(a, Polynomial):
            return a
        return Polynomial.constant(self.field, self.num_vars, a)

    def serialize(self, a) -> str:
        return to_text(a)

    def deserialize(self, text: str):
        return parse_poly(str(text), self.field, self.num_vars)

    def tag(self) -> str:
        return f"{self.field}[x0..x{self.num_vars - 1}]"


def parse_ring(tag: str):
    if "[" in tag:
        field_part, rest = tag.split("[", 1)
        top = rest.rstrip("]").split("..")[-1]
        return PolyRing(parse_field(field_part), int(top.lstrip("x")) + 1)
    return ScalarRing(parse_field(tag))


# -- skew matrices ----------------------------------------------------------------


@dataclass(frozen=True)
class SkewMatrix:
    """Skew-symmetric matrix stored by its strict upper triangle (0-based)."""

    size: int
    ring: Any
    upper: Mapping[tuple[int, int], Any] = dc_field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (i, j), v in self.upper.items():
            if not 0 <= i < j < self.size:
                raise IndexError(f"upper-triangle index ({i}, {j}) invalid for size {self.size}")
            v = self.ring.coerce(v)
            if not self.ring.is_zero(v):
                clean[(i, j)] = v
        object.__setattr__(self, "upper", clean)

    @classmethod
    def from_rows(cls, ring, rows: Sequence[Sequence]) -> "SkewMatrix":
        n = len(rows)
        upper = {}
        for i in range(n):
            for j in range(n):
                a, b = ring.coerce(rows[i][j]), ring.coerce(rows[j][i])
                if not ring.is_zero(ring.add(a, b)):
                    raise ValueError(f"entries ({i},{j}) and ({j},{i}) are not negatives")
                if j > i:
                    upper[(i, j)] = a
        return cls(n, ring, upper)

    def entry(self, i: int, j: int):
        if i == j:
            return self.ring.zero
        if i < j:
            return self.upper.get((i, j), self.ring.zero)
        v = self.upper.get((j, i))
        return self.ring.zero if v is None else self.ring.neg(v)

    def rows(self) -> list[list]:
        return [[self.entry(i, j) for j in range(self.size)] for i in range(self.size)]

    def map(self, fn: Callable, ring) -> "SkewMatrix":
        """Apply ``fn`` entrywise (must commute with negation), landing in ``ring``."""
        return SkewMatrix(self.size, ring, {k: fn(v) for k, v in self.upper.items()})

    def principal(self, keep: Sequence[int]) -> "SkewMatrix":
        keep = list(keep)
        upper = {}
        for a, i in enumerate(keep):
            for b in range(a + 1, len(keep)):
                upper[(a, b)] = self.entry(i, keep[b])
        return SkewMatrix(len(keep), self.ring, upper)

    def apply(self, vec: Sequence) -> list:
        r = self.ring
        out = []
        for i in range(self.size):
            acc = r.zero
            for j in range(self.size):
                if i != j and not r.is_zero(vec[j]):
                    e = self.entry(i, j)
                    if not r.is_zero(e):
                        acc = r.add(acc, r.mul(e, vec[j]))
            out.append(acc)
        return out

    def to_json(self) -> dict:
        return {
            "size": self.size,
            "ring": self.ring.tag(),
            "upper": [[i, j, self.ring.serialize(v)] for (i, j), v in sorted(self.upper.items())],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "SkewMatrix":
        ring = parse_ring(data["ring"])
        upper = {}
        for i, j, v in data["upper"]:
            i, j = int(i), int(j)
            if i > j:
                raise ValueError("entries must be given with i < j")
            upper[(i, j)] = ring.deserialize(v)
        return cls(int(data["size"]), ring, upper)


class _Engine:
    """First-row expansion memoized on the bitmask of remaining indices."""

    def __init__(self, m: SkewMatrix):
        self.m = m
        self.ring = m.ring
        self.memo: dict[int, Any] = {0: m.ring.one}
        n = m.size
        # adjacency: for each row i, list of (j, a_ij) with j > i and a_ij != 0
        self.nbrs = [[] for _ in range(n)]
        for (i, j), v in m.upper.items():
            self.nbrs[i].append((j, v))
        for row in self.nbrs:
            row.sort()

    def pf(self, mask: int):
        got = self.memo.get(mask)
        if got is not None:
            return got
        r = self.ring
        i = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << i)
        total = r.zero
        for j, a in self.nbrs[i]:
            bit = 1 << j
            if not rest & bit:
                continue
            sub = self.pf(rest & ~bit)
            if r.is_zero(sub):
                continue
            term = r.mul(a, sub)
            # sign from the position of j among the remaining indices above i
            if bin(rest & (bit - 1)).count("1") & 1:
                term = r.neg(term)
            total = r.add(total, term)
        self.memo[mask] = total
        return total


def pfaffian(m: SkewMatrix):
    if m.size % 2:
        raise OddSize(f"Pfaffian needs even size, got {m.size}")
    return _Engine(m).pf((1 << m.size) - 1)


def sub_pfaffian(m: SkewMatrix, removed: Iterable[int], engine: _Engine | None = None):
    """Pfaffian of the principal submatrix on the indices not in ``removed``."""
    removed = set(removed)
    if any(not 0 <= i < m.size for i in removed):
        raise IndexError(f"removed indices {sorted(removed)} out of range for size {m.size}")
    if (m.size - len(removed)) % 2:
        raise ParityError(f"{m.size} - {len(removed)} is odd")
    mask = (1 << m.size) - 1
    for i in removed:
        mask &= ~(1 << i)
    return (engine or _Engine(m)).pf(mask)


def kernel_vector(m: SkewMatrix) -> list:
    """``v_i = (-1)^i Pf(M without i)`` (0-based), which satisfies ``M v = 0``."""
    if m.size % 2 == 0:
        raise EvenSize(f"kernel vector needs odd size, got {m.size}")
    eng = _Engine(m)
    r = m.ring
    out = []
    for i in range(m.size):
        v = sub_pfaffian(m, [i], eng)
        out.append(r.neg(v) if i % 2 else v)
    return out


def engine(m: SkewMatrix) -> _Engine:
    """A shared memo for several sub-Pfaffians of the same matrix."""
    return _Engine(m)
