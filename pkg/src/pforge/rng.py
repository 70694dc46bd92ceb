"""Seeded, splittable instance generator.

Streams come from numpy's PCG64 (PCG XSL-RR 128/64) seeded through
``SeedSequence(entropy=seed, spawn_key=(attempt,))``, so every
``(seed, attempt)`` pair owns an independent stream.  Only raw 64-bit words
are consumed; uniform draws below ``n`` use plain rejection on those words,
which keeps outputs independent of numpy's higher-level sampling routines.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .fields import Field, PrimeField, QuadraticExtension, Rationals

_WORD = 1 << 64


class InstanceRNG:
    def __init__(self, seed: int, attempt: int = 0):
        if not 0 <= seed < _WORD:
            raise ValueError("seed must be a 64-bit unsigned integer")
        self.seed = seed
        self.attempt = attempt
        ss = np.random.SeedSequence(entropy=seed, spawn_key=(attempt,))
        self._bits = np.random.PCG64(ss)

    def word(self) -> int:
        return int(self._bits.random_raw())

    def below(self, n: int) -> int:
        """Uniform integer in ``[0, n)`` by rejection."""
        if not 0 < n <= _WORD:
            raise ValueError(f"bound out of range: {n}")
        limit = _WORD - _WORD % n
        while True:
            w = self.word()
            if w < limit:
                return w % n

    def element(self, field: Field, qq_bound: int = 9):
        if isinstance(field, PrimeField):
            return self.below(field.p)
        if isinstance(field, QuadraticExtension):
            return (self.below(field.p), self.below(field.p))
        if isinstance(field, Rationals):
            return Fraction(self.below(2 * qq_bound + 1) - qq_bound)
        raise TypeError(f"unsupported field {field}")

    def elements(self, field: Field, count: int) -> list:
        return [self.element(field) for _ in range(count)]
