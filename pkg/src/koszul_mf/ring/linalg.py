"""Linear algebra over the PID ``k[s]``: solving, kernels, cokernels.

Everything here is read off a Smith form ``U A V = D``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from ..errors import DimMismatch
from .field import FieldSpec
from .matrix import PolyMatrix
from .poly import Poly, t_divmod
from .snf import smith_normal_form


@dataclass(frozen=True)
class FgModulePresentation:
    """A finitely generated ``k[s]``-module ``k[s]^r + k[s]/(f_1) + ... + k[s]/(f_m)``.

    The torsion invariants are monic, nonconstant, and ``f_i | f_{i+1}``.
    """

    free_rank: int = 0
    torsion_invariants: tuple[Poly, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "torsion_invariants", tuple(self.torsion_invariants))
        for f in self.torsion_invariants:
            if not f.is_monic() or f.degree < 1:
                raise ValueError(f"torsion invariant {f} must be monic and nonconstant")
        for f, g in zip(self.torsion_invariants, self.torsion_invariants[1:]):
            if not f.divides(g):
                raise ValueError(f"invariants {f}, {g} break the divisibility chain")

    @classmethod
    def from_diagonal(cls, rank: int, diag: Iterable[Poly]) -> "FgModulePresentation":
        """Module ``k[s]^rank / (diag entries)``; ``diag`` need not be a chain.

        Zero entries contribute free summands; units are dropped.
        """
        diag = list(diag)
        free = rank - len(diag) + sum(1 for f in diag if f.is_zero())
        nz = [f for f in diag if not f.is_zero() and not f.is_unit()]
        if not nz:
            return cls(free, ())
        if all(f.divides(g) for f, g in zip(nz, nz[1:])):
            return cls(free, tuple(f.monic() for f in nz))
        F = nz[0].field
        snf = smith_normal_form(PolyMatrix.diagonal(F, nz), transforms=False)
        return cls(free, tuple(f for f in snf.invariant_factors if not f.is_unit()))

    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion_invariants

    def is_torsion(self) -> bool:
        return self.free_rank == 0

    @property
    def length(self) -> int:
        """Length as a module (dimension over ``k``); only finite for torsion modules."""
        if self.free_rank:
            raise ValueError("free modules have infinite length")
        return sum(int(f.degree) for f in self.torsion_invariants)

    def direct_sum(self, other: "FgModulePresentation") -> "FgModulePresentation":
        return FgModulePresentation.from_diagonal(
            self.free_rank + other.free_rank + len(self.torsion_invariants) + len(other.torsion_invariants),
            list(self.torsion_invariants) + list(other.torsion_invariants),
        )

    def __str__(self):
        parts = []
        if self.free_rank:
            parts.append("k[s]" if self.free_rank == 1 else f"k[s]^{self.free_rank}")
        parts.extend(f"k[s]/({f})" for f in self.torsion_invariants)
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class Solution:
    """Result of :func:`solve_linear`: a particular solution (or ``None``) and a kernel basis."""

    x: PolyMatrix | None
    kernel: PolyMatrix

    @property
    def solvable(self) -> bool:
        return self.x is not None


def solve_linear(A: PolyMatrix, b: PolyMatrix) -> Solution:
    """Solve ``A x = b`` over ``k[s]``; ``b`` may have several columns.

    Returns ``Solution(x, kernel)`` where ``x`` is ``None`` when some column of
    ``b`` is not in the ``k[s]``-span of the columns of ``A``.
    """
    if A.rows != b.rows:
        raise DimMismatch(f"A has {A.rows} rows, b has {b.rows}")
    snf = smith_normal_form(A)
    return _solve_with(snf, A.cols, b)


def _solve_with(snf, ncols: int, b: PolyMatrix) -> Solution:
    F = b.field
    p = F.p
    r = snf.rank
    kernel = snf.V.submatrix(range(ncols), range(r, ncols))
    c = snf.U @ b
    y = []
    for i in range(ncols):
        row = []
        for j in range(b.cols):
            if i < r:
                q, rem = t_divmod(c.raw(i, j), snf.D.raw(i, i), p)
                if rem:
                    return Solution(None, kernel)
                row.append(q)
            else:
                row.append(())
        y.append(row)
    for i in range(r, c.rows):
        for j in range(b.cols):
            if c.raw(i, j):
                return Solution(None, kernel)
    Y = PolyMatrix._make(F, ncols, b.cols, tuple(x for row in y for x in row))
    return Solution(snf.V @ Y, kernel)


def kernel_basis(A: PolyMatrix) -> PolyMatrix:
    """Columns form a free basis of ``ker A``; there are ``cols(A) - rank(A)`` of them."""
    snf = smith_normal_form(A)
    return snf.V.submatrix(range(A.cols), range(snf.rank, A.cols))


def kernel_with_retraction(A: PolyMatrix) -> tuple[PolyMatrix, PolyMatrix]:
    """Kernel basis ``K`` together with ``R`` such that ``R @ K = I``.

    ``R @ v`` gives the coordinates of any ``v`` in ``ker A`` with respect to ``K``.
    """
    snf = smith_normal_form(A, with_inverse=True)
    n, r = A.cols, snf.rank
    return snf.V.submatrix(range(n), range(r, n)), snf.V_inv.submatrix(range(r, n), range(n))


def cokernel_presentation(A: PolyMatrix) -> FgModulePresentation:
    """Invariant-factor form of ``k[s]^rows(A) / im A``."""
    snf = smith_normal_form(A, transforms=False)
    return FgModulePresentation.from_diagonal(A.rows, snf.invariant_factors)


def in_column_span(A: PolyMatrix, v: PolyMatrix) -> bool:
    return solve_linear(A, v).solvable


def column_vector(field: FieldSpec, entries: Sequence) -> PolyMatrix:
    return PolyMatrix.from_rows(field, [[x] for x in entries], 1)
