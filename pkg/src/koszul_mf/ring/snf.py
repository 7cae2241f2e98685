"""Smith normal form over ``k[s]``.

Pivoting picks the nonzero entry of least degree in the active submatrix;
ties go to the least Markowitz count ``(r-1)(c-1)`` (nonzeros in its row and
column), then to the smallest row and column. Without the Markowitz step,
sparse Kronecker-structured systems over Q suffer severe coefficient
explosion. Diagonal entries are made monic,
which makes ``D`` unique; the transforms ``U`` and ``V`` are not.

Long reductions can be interrupted: inside ``with cancel_scope(event):`` the
elimination loop raises :class:`~koszul_mf.errors.Cancelled` once ``event`` is
set.
"""

from __future__ import annotations

import contextlib
import contextvars
import threading
from dataclasses import dataclass

from ..errors import Cancelled
from .matrix import PolyMatrix
from .poly import Poly, t_divmod, t_gcd, t_inv, t_mul, t_neg, t_one, t_scale, t_sub

_CANCEL: contextvars.ContextVar[threading.Event | None] = contextvars.ContextVar("snf_cancel", default=None)


@contextlib.contextmanager
def cancel_scope(event: threading.Event):
    token = _CANCEL.set(event)
    try:
        yield event
    finally:
        _CANCEL.reset(token)


@dataclass(frozen=True)
class SnfResult:
    """``U @ A @ V == D`` with ``U``, ``V`` unimodular and ``D`` in Smith form.

    ``V_inv`` is filled in only when requested from :func:`smith_normal_form`.
    """

    U: PolyMatrix | None
    D: PolyMatrix
    V: PolyMatrix | None
    rank: int
    V_inv: PolyMatrix | None = None

    @property
    def diagonal(self) -> list[Poly]:
        return [self.D[i, i] for i in range(min(self.D.rows, self.D.cols))]

    @property
    def invariant_factors(self) -> list[Poly]:
        """The nonzero diagonal entries, each dividing the next."""
        return [self.D[i, i] for i in range(self.rank)]


def _identity_rows(n: int, one: tuple) -> list[list[tuple]]:
    rows = [[()] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = one
    return rows


def _reduce(A: PolyMatrix, track_u: bool, track_v: bool, track_vinv: bool):
    p = A.field.p
    m, n = A.rows, A.cols
    a = A.raw_rows()
    one = t_one(p)
    U = _identity_rows(m, one) if track_u else None
    V = _identity_rows(n, one) if track_v else None
    Vi = _identity_rows(n, one) if track_vinv else None
    cancel = _CANCEL.get()

    def row_axpy(rows, dst, src, q, start=0):
        # rows[dst] -= q * rows[src]
        rs, rd = rows[src], rows[dst]
        for k in range(start, len(rd)):
            y = rs[k]
            if y:
                rd[k] = t_sub(rd[k], t_mul(q, y, p), p)

    def col_axpy(rows, dst, src, q, start=0):
        # column dst -= q * column src
        for k in range(start, len(rows)):
            r = rows[k]
            y = r[src]
            if y:
                r[dst] = t_sub(r[dst], t_mul(q, y, p), p)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        if V is not None:
            for r in V:
                r[i], r[j] = r[j], r[i]
        if Vi is not None:
            Vi[i], Vi[j] = Vi[j], Vi[i]

    def find_pivot(t):
        # least degree, then least Markowitz fill-in (r-1)(c-1), then row, column
        rc = [0] * m
        cc = [0] * n
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                if row[j]:
                    rc[i] += 1
                    cc[j] += 1
        best, best_key = None, None
        for i in range(t, m):
            row = a[i]
            ri = rc[i] - 1
            for j in range(t, n):
                x = row[j]
                if x:
                    key = (len(x), ri * (cc[j] - 1))
                    if best_key is None or key < best_key:
                        best, best_key = (i, j), key
        return best

    t = 0
    while t < min(m, n):
        if cancel is not None and cancel.is_set():
            raise Cancelled("Smith form interrupted")
        pos = find_pivot(t)
        if pos is None:
            break
        while True:
            i0, j0 = pos
            if i0 != t:
                swap_rows(t, i0)
            if j0 != t:
                swap_cols(t, j0)
            piv = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                x = a[i][t]
                if x:
                    q, r = t_divmod(x, piv, p)
                    row_axpy(a, i, t, q, t)
                    if U is not None:
                        row_axpy(U, i, t, q)
                    if r:
                        dirty = True
            for j in range(t + 1, n):
                x = a[t][j]
                if x:
                    q, r = t_divmod(x, piv, p)
                    col_axpy(a, j, t, q, t)
                    if V is not None:
                        col_axpy(V, j, t, q)
                    if Vi is not None:
                        row_axpy(Vi, t, j, t_neg(q, p))
                    if r:
                        dirty = True
            if dirty:
                pos = find_pivot(t)
                continue
            bad = None
            for i in range(t + 1, m):
                row = a[i]
                for j in range(t + 1, n):
                    if row[j] and t_divmod(row[j], piv, p)[1]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            # row_t += row_bad; the row sweep then leaves a smaller remainder
            row_axpy(a, t, bad, t_neg(one, p), t)
            if U is not None:
                row_axpy(U, t, bad, t_neg(one, p))
            pos = (t, t)
        t += 1
    rank = t
    for i in range(rank):
        lc = a[i][i][-1]
        if lc != 1:
            c = t_inv(lc, p)
            a[i][i] = t_scale(a[i][i], c, p)
            if U is not None:
                U[i] = [t_scale(x, c, p) for x in U[i]]
    return a, U, V, Vi, rank


def _to_matrix(field, rows: list[list[tuple]], ncols: int) -> PolyMatrix:
    return PolyMatrix._make(field, len(rows), ncols, tuple(x for r in rows for x in r))


def smith_normal_form(A: PolyMatrix, *, transforms: bool = True, with_inverse: bool = False) -> SnfResult:
    """Compute ``U @ A @ V = D`` with monic diagonal ``d_1 | d_2 | ...``.

    With ``transforms=False`` only ``D`` and the rank are computed.
    ``with_inverse`` additionally returns ``V_inv``.
    """
    a, U, V, Vi, rank = _reduce(A, transforms, transforms, with_inverse)
    f = A.field
    D = PolyMatrix.diagonal(f, [a[i][i] for i in range(rank)], A.rows, A.cols)
    return SnfResult(
        U=_to_matrix(f, U, A.rows) if U is not None else None,
        D=D,
        V=_to_matrix(f, V, A.cols) if V is not None else None,
        rank=rank,
        V_inv=_to_matrix(f, Vi, A.cols) if Vi is not None else None,
    )


def invariant_factors(A: PolyMatrix) -> list[Poly]:
    """Monic invariant factors of ``A`` (the nonzero Smith diagonal)."""
    return smith_normal_form(A, transforms=False).invariant_factors


def rank(A: PolyMatrix) -> int:
    return smith_normal_form(A, transforms=False).rank


def determinant(A: PolyMatrix) -> Poly:
    """Determinant by fraction-free (Bareiss) elimination."""
    if not A.is_square():
        raise ValueError("determinant of a non-square matrix")
    p = A.field.p
    n = A.rows
    if n == 0:
        return Poly.one(A.field)
    a = A.raw_rows()
    sign = 1
    prev = t_one(p)
    for k in range(n - 1):
        if not a[k][k]:
            sw = next((i for i in range(k + 1, n) if a[i][k]), None)
            if sw is None:
                return Poly.zero(A.field)
            a[k], a[sw] = a[sw], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = t_sub(t_mul(a[i][j], a[k][k], p), t_mul(a[i][k], a[k][j], p), p)
                q, r = t_divmod(num, prev, p)
                assert not r, "Bareiss division must be exact"
                a[i][j] = q
        prev = a[k][k]
    det = a[n - 1][n - 1]
    if sign < 0:
        det = t_neg(det, p)
    return Poly._raw(A.field, det)


def gcd_list(polys) -> Poly | None:
    it = iter(polys)
    g = None
    for x in it:
        g = x if g is None else Poly._raw(x.field, t_gcd(g.coeffs, x.coeffs, x.field.p))
    return g

