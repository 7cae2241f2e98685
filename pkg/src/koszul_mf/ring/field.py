"""Coefficient fields: the rationals and prime fields F_p.

Rational elements are ``gmpy2.mpq``; prime-field elements are plain ``int``
values reduced into ``[0, p)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from gmpy2 import is_prime, mpq

_PRIME_LIMIT = 2**31


@dataclass(frozen=True)
class FieldSpec:
    """A coefficient field. ``p == 0`` means the rationals."""

    p: int = 0

    def __post_init__(self):
        if self.p != 0:
            if not (2 <= self.p < _PRIME_LIMIT) or not is_prime(self.p):
                raise ValueError(f"F_p needs a prime 2 <= p < 2^31, got {self.p}")

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(0)

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls(int(p))

    @property
    def is_rational(self) -> bool:
        return self.p == 0

    @property
    def zero(self):
        return mpq(0) if self.p == 0 else 0

    @property
    def one(self):
        return mpq(1) if self.p == 0 else 1

    def __call__(self, x: Any):
        """Coerce ``x`` (int, Fraction, mpq, or ``"a/b"`` string) into the field."""
        if self.p == 0:
            if isinstance(x, str):
                return mpq(Fraction(x))
            if isinstance(x, Fraction):
                return mpq(x.numerator, x.denominator)
            return mpq(x)
        if isinstance(x, Fraction) or type(x).__name__ == "mpq":
            num, den = int(x.numerator), int(x.denominator)
            if den % self.p == 0:
                raise ZeroDivisionError(f"{x} has no image in F_{self.p}")
            return num * pow(den, -1, self.p) % self.p
        return int(x) % self.p

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        if self.p == 0:
            return 1 / a
        return pow(int(a), -1, self.p)

    def neg(self, a):
        return -a if self.p == 0 else (-a) % self.p

    def mul(self, a, b):
        return a * b if self.p == 0 else a * b % self.p

    def add(self, a, b):
        return a + b if self.p == 0 else (a + b) % self.p

    def power(self, a, n: int):
        if self.p == 0:
            return a**n if n >= 0 else (1 / a) ** (-n)
        return pow(int(a), n, self.p)

    def __str__(self):
        return "Q" if self.p == 0 else f"F_{self.p}"


QQ = FieldSpec(0)


def GF(p: int) -> FieldSpec:
    return FieldSpec(p)
