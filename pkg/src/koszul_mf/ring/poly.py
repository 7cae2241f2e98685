"""Univariate polynomials over a coefficient field.

The heavy routines (Smith form, matrix products) work on raw coefficient
tuples through the ``t_*`` helpers below; :class:`Poly` wraps a tuple together
with its field for everything user facing. Coefficients are stored lowest
degree first with trailing zeros stripped, so the zero polynomial is ``()``.
"""

from __future__ import annotations

from gmpy2 import mpq

from ..errors import FieldMismatch
from .field import FieldSpec

_MPQ_ONE = mpq(1)

# -- raw tuple arithmetic ---------------------------------------------------
# ``p`` is the field characteristic (0 for Q). All inputs are canonical.


def t_strip(c: list) -> tuple:
    n = len(c)
    while n and not c[n - 1]:
        n -= 1
    return tuple(c[:n])


def t_add(a: tuple, b: tuple, p: int) -> tuple:
    if not a:
        return b
    if not b:
        return a
    if len(a) < len(b):
        a, b = b, a
    c = list(a)
    for i, x in enumerate(b):
        c[i] += x
    if p:
        c = [x % p for x in c]
    return t_strip(c)


def t_neg(a: tuple, p: int) -> tuple:
    if p:
        return tuple((-x) % p for x in a)
    return tuple(-x for x in a)


def t_sub(a: tuple, b: tuple, p: int) -> tuple:
    if not b:
        return a
    return t_add(a, t_neg(b, p), p)


def t_mul(a: tuple, b: tuple, p: int) -> tuple:
    if not a or not b:
        return ()
    if len(a) == 1:
        return t_scale(b, a[0], p)
    if len(b) == 1:
        return t_scale(a, b[0], p)
    c = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            c[i + j] += x * y
    if p:
        c = [x % p for x in c]
    return t_strip(c)


def t_scale(a: tuple, k, p: int) -> tuple:
    if not k or not a:
        return ()
    if p:
        return t_strip([x * k % p for x in a])
    return tuple(x * k for x in a)


def t_inv(x, p: int):
    if p:
        return pow(x, -1, p)
    return 1 / x


def t_divmod(a: tuple, b: tuple, p: int) -> tuple[tuple, tuple]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    db = len(b) - 1
    if len(a) - 1 < db:
        return (), a
    inv = t_inv(b[-1], p)
    r = list(a)
    q = [0] * (len(a) - db)
    for k in range(len(a) - 1 - db, -1, -1):
        coef = r[k + db]
        if not coef:
            continue
        coef = coef * inv % p if p else coef * inv
        q[k] = coef
        for j in range(db + 1):
            r[k + j] -= coef * b[j]
        if p:
            for j in range(db + 1):
                r[k + j] %= p
        r[k + db] = 0
    return t_strip(q), t_strip(r[:db])


def t_monic(a: tuple, p: int) -> tuple:
    if not a or a[-1] == 1:
        return a
    return t_scale(a, t_inv(a[-1], p), p)


def t_gcd(a: tuple, b: tuple, p: int) -> tuple:
    while b:
        a, b = b, t_divmod(a, b, p)[1]
    return t_monic(a, p)


def t_xgcd(a: tuple, b: tuple, p: int) -> tuple[tuple, tuple, tuple]:
    """Return ``(g, x, y)`` with ``x*a + y*b = g`` and ``g`` monic (or zero)."""
    r0, r1 = a, b
    s0, s1 = t_one(p), ()
    t0, t1 = (), s0
    while r1:
        q, r = t_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, t_sub(s0, t_mul(q, s1, p), p)
        t0, t1 = t1, t_sub(t0, t_mul(q, t1, p), p)
    if not r0:
        return (), (), ()
    k = t_inv(r0[-1], p)
    return t_scale(r0, k, p), t_scale(s0, k, p), t_scale(t0, k, p)


def t_one(p: int) -> tuple:
    return (1,) if p else (_MPQ_ONE,)


def t_substitute_monomial(a: tuple, c, k: int, p: int) -> tuple:
    """Substitute ``s -> c * s**k`` into ``a``."""
    if not a:
        return ()
    out = [0] * ((len(a) - 1) * k + 1)
    power = 1
    for i, x in enumerate(a):
        out[i * k] = x * power % p if p else x * power
        power = power * c % p if p else power * c
    return t_strip(out)


# -- user facing wrapper -----------------------------------------------------


class Poly:
    """An immutable polynomial in ``s`` over ``field``."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldSpec, coeffs=()):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", t_strip([field(x) for x in coeffs]))

    @classmethod
    def _raw(cls, field: FieldSpec, coeffs: tuple) -> "Poly":
        obj = object.__new__(cls)
        object.__setattr__(obj, "field", field)
        object.__setattr__(obj, "coeffs", coeffs)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def zero(cls, field: FieldSpec) -> "Poly":
        return cls._raw(field, ())

    @classmethod
    def one(cls, field: FieldSpec) -> "Poly":
        return cls._raw(field, t_one(field.p))

    @classmethod
    def const(cls, field: FieldSpec, c) -> "Poly":
        return cls(field, [c])

    @classmethod
    def monomial(cls, field: FieldSpec, degree: int, c=1) -> "Poly":
        return cls(field, [0] * degree + [c])

    @property
    def degree(self) -> float | int:
        """Degree, with ``float('-inf')`` for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else float("-inf")

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else self.field.zero

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_unit(self) -> bool:
        return len(self.coeffs) == 1

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def monic(self) -> "Poly":
        return Poly._raw(self.field, t_monic(self.coeffs, self.field.p))

    def _check(self, other) -> "Poly":
        if not isinstance(other, Poly):
            other = Poly(self.field, [other])
        elif other.field is not self.field and other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")
        return other

    def __add__(self, other):
        other = self._check(other)
        return Poly._raw(self.field, t_add(self.coeffs, other.coeffs, self.field.p))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        return Poly._raw(self.field, t_sub(self.coeffs, other.coeffs, self.field.p))

    def __rsub__(self, other):
        return self._check(other) - self

    def __neg__(self):
        return Poly._raw(self.field, t_neg(self.coeffs, self.field.p))

    def __mul__(self, other):
        other = self._check(other)
        return Poly._raw(self.field, t_mul(self.coeffs, other.coeffs, self.field.p))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = Poly.one(self.field)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __divmod__(self, other):
        other = self._check(other)
        q, r = t_divmod(self.coeffs, other.coeffs, self.field.p)
        return Poly._raw(self.field, q), Poly._raw(self.field, r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def divides(self, other: "Poly") -> bool:
        """True if ``self`` divides ``other``."""
        if self.is_zero():
            return other.is_zero()
        return (other % self).is_zero()

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def gcd(self, other: "Poly") -> "Poly":
        other = self._check(other)
        return Poly._raw(self.field, t_gcd(self.coeffs, other.coeffs, self.field.p))

    def __call__(self, x):
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = self.field.add(self.field.mul(acc, x), c)
        return acc

    def substitute_monomial(self, c, k: int = 1) -> "Poly":
        """Return ``self(c * s**k)``."""
        c = self.field(c)
        return Poly._raw(self.field, t_substitute_monomial(self.coeffs, c, k, self.field.p))

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == t_strip([self.field(other)])
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return f"Poly({self.field}, {str(self)!r})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else ("s" if i == 1 else f"s^{i}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif self.field.p == 0 and c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}*{mono}")
        return " + ".join(terms).replace("+ -", "- ")


def poly(field: FieldSpec, *coeffs) -> Poly:
    """Shorthand: ``poly(QQ, 1, 0, 2)`` is ``1 + 2 s^2``."""
    return Poly(field, coeffs)
