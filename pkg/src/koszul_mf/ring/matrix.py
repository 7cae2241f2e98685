"""Dense matrices over ``k[s]``.

Entries are kept as raw coefficient tuples (see :mod:`.poly`) in row-major
order; indexing hands back :class:`Poly` objects. Zero-sized matrices are legal
and compose like zero maps.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from ..errors import DimMismatch, FieldMismatch
from .field import FieldSpec
from .poly import (
    Poly,
    t_add,
    t_mul,
    t_neg,
    t_one,
    t_scale,
    t_strip,
    t_sub,
    t_substitute_monomial,
)


def _raw(field: FieldSpec, x) -> tuple:
    if isinstance(x, Poly):
        if x.field != field:
            raise FieldMismatch(f"{x.field} entry in a {field} matrix")
        return x.coeffs
    if isinstance(x, tuple):
        return x
    return t_strip([field(x)])


class PolyMatrix:
    """An immutable ``rows x cols`` matrix with entries in ``field[s]``."""

    __slots__ = ("field", "rows", "cols", "_e", "_hash")

    def __init__(self, field: FieldSpec, rows: int, cols: int, entries: Iterable = ()):
        e = tuple(_raw(field, x) for x in entries)
        if not e and rows * cols:
            e = ((),) * (rows * cols)
        if len(e) != rows * cols:
            raise DimMismatch(f"{len(e)} entries for a {rows}x{cols} matrix")
        self.field = field
        self.rows = rows
        self.cols = cols
        self._e = e
        self._hash = None

    @classmethod
    def _make(cls, field, rows, cols, e: tuple) -> "PolyMatrix":
        obj = object.__new__(cls)
        obj.field, obj.rows, obj.cols, obj._e, obj._hash = field, rows, cols, e, None
        return obj

    # -- constructors ---------------------------------------------------------

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Sequence[Sequence], cols: int | None = None):
        rows = list(rows)
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise DimMismatch("ragged rows")
        return cls(field, len(rows), cols, [x for r in rows for x in r])

    @classmethod
    def zero(cls, field: FieldSpec, rows: int, cols: int) -> "PolyMatrix":
        return cls._make(field, rows, cols, ((),) * (rows * cols))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "PolyMatrix":
        return cls.scalar(field, n, t_one(field.p))

    @classmethod
    def scalar(cls, field: FieldSpec, n: int, c) -> "PolyMatrix":
        c = _raw(field, c)
        e = [()] * (n * n)
        for i in range(n):
            e[i * n + i] = c
        return cls._make(field, n, n, tuple(e))

    @classmethod
    def diagonal(cls, field: FieldSpec, diag: Sequence, rows: int | None = None, cols: int | None = None):
        diag = [_raw(field, x) for x in diag]
        rows = len(diag) if rows is None else rows
        cols = len(diag) if cols is None else cols
        e = [()] * (rows * cols)
        for i, x in enumerate(diag):
            e[i * cols + i] = x
        return cls._make(field, rows, cols, tuple(e))

    @classmethod
    def block(cls, field: FieldSpec, blocks: Sequence[Sequence["PolyMatrix"]], row_sizes=None, col_sizes=None):
        """Assemble a block matrix; ``None`` blocks are zero of the implied size."""
        nr, nc = len(blocks), len(blocks[0]) if blocks else 0
        if row_sizes is None:
            row_sizes = [next(b.rows for b in blocks[i] if b is not None) for i in range(nr)]
        if col_sizes is None:
            col_sizes = [next(blocks[i][j].cols for i in range(nr) if blocks[i][j] is not None) for j in range(nc)]
        rows, cols = sum(row_sizes), sum(col_sizes)
        e = [()] * (rows * cols)
        r0 = 0
        for i in range(nr):
            c0 = 0
            for j in range(nc):
                b = blocks[i][j]
                if b is not None:
                    if (b.rows, b.cols) != (row_sizes[i], col_sizes[j]):
                        raise DimMismatch(f"block ({i},{j}) is {b.rows}x{b.cols}, expected {row_sizes[i]}x{col_sizes[j]}")
                    for a in range(b.rows):
                        base = (r0 + a) * cols + c0
                        e[base:base + b.cols] = b._e[a * b.cols:(a + 1) * b.cols]
                c0 += col_sizes[j]
            r0 += row_sizes[i]
        return cls._make(field, rows, cols, tuple(e))

    # -- access ---------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij) -> Poly:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return Poly._raw(self.field, self._e[i * self.cols + j])

    def raw(self, i: int, j: int) -> tuple:
        return self._e[i * self.cols + j]

    def to_rows(self) -> list[list[Poly]]:
        return [[self[i, j] for j in range(self.cols)] for i in range(self.rows)]

    def raw_rows(self) -> list[list[tuple]]:
        c = self.cols
        return [list(self._e[i * c:(i + 1) * c]) for i in range(self.rows)]

    def submatrix(self, rows: Sequence[int] | range, cols: Sequence[int] | range) -> "PolyMatrix":
        rows, cols = list(rows), list(cols)
        c = self.cols
        return PolyMatrix._make(self.field, len(rows), len(cols), tuple(self._e[i * c + j] for i in rows for j in cols))

    def column(self, j: int) -> "PolyMatrix":
        return self.submatrix(range(self.rows), [j])

    def is_zero(self) -> bool:
        return not any(self._e)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def max_degree(self) -> int:
        return max((len(x) - 1 for x in self._e if x), default=-1)

    # -- arithmetic -----------------------------------------------------------

    def _same(self, other: "PolyMatrix"):
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._same(other)
        if self.shape != other.shape:
            raise DimMismatch(f"{self.shape} + {other.shape}")
        p = self.field.p
        return PolyMatrix._make(self.field, self.rows, self.cols, tuple(t_add(a, b, p) for a, b in zip(self._e, other._e)))

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._same(other)
        if self.shape != other.shape:
            raise DimMismatch(f"{self.shape} - {other.shape}")
        p = self.field.p
        return PolyMatrix._make(self.field, self.rows, self.cols, tuple(t_sub(a, b, p) for a, b in zip(self._e, other._e)))

    def __neg__(self) -> "PolyMatrix":
        p = self.field.p
        return PolyMatrix._make(self.field, self.rows, self.cols, tuple(t_neg(a, p) for a in self._e))

    def scale(self, c) -> "PolyMatrix":
        """Multiply every entry by the polynomial or scalar ``c``."""
        c = _raw(self.field, c)
        p = self.field.p
        if len(c) == 1:
            return PolyMatrix._make(self.field, self.rows, self.cols, tuple(t_scale(a, c[0], p) for a in self._e))
        return PolyMatrix._make(self.field, self.rows, self.cols, tuple(t_mul(a, c, p) for a in self._e))

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._same(other)
        if self.cols != other.rows:
            raise DimMismatch(f"{self.shape} @ {other.shape}")
        p = self.field.p
        n, m, k = self.rows, other.cols, self.cols
        a, b = self._e, other._e
        out = []
        for i in range(n):
            arow = a[i * k:(i + 1) * k]
            nz = [(t, x) for t, x in enumerate(arow) if x]
            for j in range(m):
                acc = ()
                for t, x in nz:
                    y = b[t * m + j]
                    if y:
                        acc = t_add(acc, t_mul(x, y, p), p)
                out.append(acc)
        return PolyMatrix._make(self.field, n, m, tuple(out))

    __mul__ = __matmul__

    def transpose(self) -> "PolyMatrix":
        r, c = self.rows, self.cols
        return PolyMatrix._make(self.field, c, r, tuple(self._e[i * c + j] for j in range(c) for i in range(r)))

    @property
    def T(self) -> "PolyMatrix":
        return self.transpose()

    def hstack(self, *others: "PolyMatrix") -> "PolyMatrix":
        mats = (self,) + others
        return PolyMatrix.block(self.field, [list(mats)], [self.rows], [m.cols for m in mats])

    def vstack(self, *others: "PolyMatrix") -> "PolyMatrix":
        mats = (self,) + others
        return PolyMatrix.block(self.field, [[m] for m in mats], [m.rows for m in mats], [self.cols])

    def map_raw(self, fn) -> "PolyMatrix":
        return PolyMatrix._make(self.field, self.rows, self.cols, tuple(fn(x) for x in self._e))

    def substitute_monomial(self, c, k: int = 1) -> "PolyMatrix":
        """Substitute ``s -> c * s**k`` in every entry."""
        c = self.field(c)
        p = self.field.p
        return self.map_raw(lambda x: t_substitute_monomial(x, c, k, p))

    def kron(self, other: "PolyMatrix") -> "PolyMatrix":
        self._same(other)
        p = self.field.p
        r, c = self.rows * other.rows, self.cols * other.cols
        e = [()] * (r * c)
        for i in range(self.rows):
            for j in range(self.cols):
                x = self._e[i * self.cols + j]
                if not x:
                    continue
                for a in range(other.rows):
                    base = (i * other.rows + a) * c + j * other.cols
                    for b in range(other.cols):
                        y = other._e[a * other.cols + b]
                        if y:
                            e[base + b] = t_mul(x, y, p)
        return PolyMatrix._make(self.field, r, c, tuple(e))

    # -- comparison -----------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and self._e == other._e

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.rows, self.cols, self._e))
        return self._hash

    def __repr__(self):
        return f"PolyMatrix({self.rows}x{self.cols} over {self.field})"

    def __str__(self):
        if not self.rows or not self.cols:
            return f"[{self.rows}x{self.cols} empty]"
        cells = [[str(x) for x in row] for row in self.to_rows()]
        width = max(len(c) for row in cells for c in row)
        return "\n".join("[" + "  ".join(c.rjust(width) for c in row) + "]" for row in cells)


def mat(field: FieldSpec, rows: Sequence[Sequence]) -> PolyMatrix:
    """Build a matrix from nested rows of polynomials, scalars, or coefficient lists.

    A plain list entry is read as a coefficient list, lowest degree first.
    """

    def conv(x):
        if isinstance(x, list):
            return Poly(field, x)
        return x

    ncols = len(rows[0]) if rows else 0
    return PolyMatrix.from_rows(field, [[conv(x) for x in r] for r in rows], ncols)
