"""Matrix factorizations of ``pi_K`` over ``k[s]``.

An object is ``(E^0, E^1, d, h)`` with ``d h = pi`` and ``h d = pi``. Hom spaces
are ``Z/2``-graded; an odd map is a pair ``(t0 : E^0 -> F^1, t1 : E^1 -> F^0)``
and ``D(f) = delta_F f - (-1)^|f| f delta_E`` with ``delta = d + h``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dg import CohomologyTable, OneHomotopyModule, TwoHomotopyModule, Violation, complex_cohomology
from .errors import ConventionViolation, DimMismatch, NotMfMorphism, StructuralViolation, TowerMismatch
from .ring import FgModulePresentation, PolyMatrix, smith_normal_form, solve_linear
from .tower import RingTower


class MatrixFactorization:
    __slots__ = ("tower", "d", "h")

    def __init__(self, tower: RingTower, d: PolyMatrix, h: PolyMatrix):
        if d.field != tower.field or h.field != tower.field:
            raise TowerMismatch("matrix field differs from the tower field")
        if h.shape != (d.cols, d.rows):
            raise DimMismatch(f"d is {d.shape} but h is {h.shape}")
        if d.rows != d.cols:
            # det d * det h = pi^rank forces square blocks over a domain
            raise StructuralViolation(f"rank0 = {d.cols} differs from rank1 = {d.rows}")
        self.tower, self.d, self.h = tower, d, h

    @classmethod
    def zero(cls, tower: RingTower) -> "MatrixFactorization":
        z = PolyMatrix.zero(tower.field, 0, 0)
        return cls(tower, z, z)

    @classmethod
    def trivial(cls, tower: RingTower, rank: int = 1, *, swapped: bool = False) -> "MatrixFactorization":
        """``(1, pi)``, or ``(pi, 1)`` when ``swapped``."""
        one, pi = PolyMatrix.identity(tower.field, rank), tower.pi_id(rank)
        return cls(tower, pi, one) if swapped else cls(tower, one, pi)

    @property
    def field(self):
        return self.tower.field

    @property
    def rank0(self) -> int:
        return self.d.cols

    @property
    def rank1(self) -> int:
        return self.d.rows

    @property
    def rank(self) -> int:
        return self.d.cols

    def is_zero(self) -> bool:
        return self.rank == 0

    def identity(self) -> "MfMorphism":
        I = PolyMatrix.identity(self.field, self.rank)
        return MfMorphism(self, self, I, I)

    def __eq__(self, other):
        if not isinstance(other, MatrixFactorization):
            return NotImplemented
        return (self.tower, self.d, self.h) == (other.tower, other.d, other.h)

    def __hash__(self):
        return hash((self.tower, self.d, self.h))

    def __repr__(self):
        return f"MatrixFactorization(rank {self.rank} over {self.tower})"


def validate_mf(E: MatrixFactorization) -> list[Violation]:
    out = []
    pi = E.tower.pi_id(E.rank)
    r = E.d @ E.h - pi
    if not r.is_zero():
        out.append(Violation("d∘h = pi_K·id", 1, r))
    r = E.h @ E.d - pi
    if not r.is_zero():
        out.append(Violation("h∘d = pi_K·id", 0, r))
    return out


@dataclass(frozen=True, eq=True)
class MfMorphism:
    """An even map ``(phi0 : E^0 -> F^0, phi1 : E^1 -> F^1)``; validity is checked on demand."""

    source: MatrixFactorization
    target: MatrixFactorization
    phi0: PolyMatrix
    phi1: PolyMatrix

    def __post_init__(self):
        if self.source.tower != self.target.tower:
            raise TowerMismatch("morphism between different towers")
        if self.phi0.shape != (self.target.rank0, self.source.rank0) or self.phi1.shape != (self.target.rank1, self.source.rank1):
            raise DimMismatch("morphism components have the wrong shape")

    def residuals(self) -> list[Violation]:
        E, F = self.source, self.target
        out = []
        r = self.phi1 @ E.d - F.d @ self.phi0
        if not r.is_zero():
            out.append(Violation("phi1∘d = d'∘phi0", 0, r))
        r = self.phi0 @ E.h - F.h @ self.phi1
        if not r.is_zero():
            out.append(Violation("phi0∘h = h'∘phi1", 1, r))
        return out

    def is_valid(self) -> bool:
        return not self.residuals()

    def __matmul__(self, other: "MfMorphism") -> "MfMorphism":
        return MfMorphism(other.source, self.target, self.phi0 @ other.phi0, self.phi1 @ other.phi1)

    def __sub__(self, other: "MfMorphism") -> "MfMorphism":
        return MfMorphism(self.source, self.target, self.phi0 - other.phi0, self.phi1 - other.phi1)


def mf_shift(E: MatrixFactorization) -> MatrixFactorization:
    """``(E^0, E^1, d, h) -> (E^1, E^0, -h, -d)``."""
    return MatrixFactorization(E.tower, -E.h, -E.d)


@dataclass(frozen=True)
class MfCone:
    cone: MatrixFactorization
    inclusion: MfMorphism
    projection: MfMorphism


def mf_cone(phi: MfMorphism) -> MfCone:
    """Cone of ``phi : E -> E'`` with ``cone^0 = E^1 + E'^0`` and ``cone^1 = E'^1 + E^0``.

    ``d = [[phi1, d'], [-h, 0]]`` and ``h = [[0, -d], [h', phi0]]``; the triangle
    maps are ``E' -> cone -> E[1]``.
    """
    if not phi.is_valid():
        raise NotMfMorphism(str(phi.residuals()[0]))
    E, F = phi.source, phi.target
    K = E.field
    r, q = E.rank, F.rank
    d = PolyMatrix.block(K, [[phi.phi1, F.d], [-E.h, None]], [q, r], [r, q])
    h = PolyMatrix.block(K, [[None, -E.d], [F.h, phi.phi0]], [r, q], [q, r])
    C = MatrixFactorization(E.tower, d, h)
    Iq, Ir = PolyMatrix.identity(K, q), PolyMatrix.identity(K, r)
    inc = MfMorphism(F, C, PolyMatrix.block(K, [[None], [Iq]], [r, q], [q]), PolyMatrix.block(K, [[Iq], [None]], [q, r], [q]))
    proj = MfMorphism(C, mf_shift(E), PolyMatrix.block(K, [[Ir, None]], [r], [r, q]), PolyMatrix.block(K, [[None, Ir]], [r], [q, r]))
    return MfCone(C, inc, proj)


def mf_direct_sum(E: MatrixFactorization, F: MatrixFactorization) -> MatrixFactorization:
    if E.tower != F.tower:
        raise TowerMismatch("direct sum over different towers")
    K = E.field
    bd = lambda a, b: PolyMatrix.block(K, [[a, None], [None, b]], [a.rows, b.rows], [a.cols, b.cols])  # noqa: E731
    return MatrixFactorization(E.tower, bd(E.d, F.d), bd(E.h, F.h))


# -- folding ---------------------------------------------------------------------------


def fold(M) -> MatrixFactorization | MfMorphism:
    """``(E, d, h) -> (sum E^{even}, sum E^{odd}, d + h, d + h)``, blocks in increasing degree.

    Also accepts a degree 0 morphism of one-homotopy modules.
    """
    from .dg import DgMorphism

    if isinstance(M, DgMorphism):
        if M.degree != 0:
            raise ValueError("only degree 0 morphisms fold to MF morphisms")
        E, F = M.source, M.target
        K = E.field
        src, tgt = fold(E), fold(F)
        comps = []
        for parity in (0, 1):
            ed = [n for n in _all_degrees(E, F) if n % 2 == parity]
            blocks = [[M.component(j) if i == j else None for j in ed] for i in ed]
            comps.append(PolyMatrix.block(K, blocks, [F.rank(n) for n in ed], [E.rank(n) for n in ed]) if ed else PolyMatrix.zero(K, 0, 0))
        return MfMorphism(src, tgt, comps[0], comps[1])
    if not isinstance(M, OneHomotopyModule):
        raise TypeError("fold expects a one-homotopy module")
    K = M.field
    degs = list(M.degrees)
    even = [n for n in degs if n % 2 == 0]
    odd = [n for n in degs if n % 2]
    if not degs:
        return MatrixFactorization.zero(M.tower)

    def delta(n_to, n_from):
        if n_to == n_from + 1:
            return M.dmap(n_from)
        if n_to == n_from - 1:
            return M.h_at(n_from)
        return None

    d = PolyMatrix.block(K, [[delta(i, j) for j in even] for i in odd], [M.rank(n) for n in odd], [M.rank(n) for n in even])
    h = PolyMatrix.block(K, [[delta(i, j) for j in odd] for i in even], [M.rank(n) for n in even], [M.rank(n) for n in odd])
    return MatrixFactorization(M.tower, d, h)


def _all_degrees(E, F):
    # fold orders blocks by the degrees of each module separately; morphism blocks use the same order
    degs = set(E.degrees) | set(F.degrees)
    return sorted(n for n in degs if E.rank(n) or F.rank(n))


def unfold(E: MatrixFactorization) -> TwoHomotopyModule:
    """``(E^0 --d--> E^1, {h, h})`` in degrees ``[0, 1]``."""
    if E.is_zero():
        return TwoHomotopyModule.zero(E.tower)
    return TwoHomotopyModule.two_term(E.tower, E.d, E.h, E.h, degree=0)


# -- hom complex and contractibility -------------------------------------------------


def _vec(m: PolyMatrix) -> list:
    return list(m._e)


def _unvec(K, v: PolyMatrix, start: int, rows: int, cols: int) -> PolyMatrix:
    return PolyMatrix._make(K, rows, cols, tuple(v.raw(start + t, 0) for t in range(rows * cols)))


class MfHom:
    """Ambient matrices of the two-periodic complex ``Hom(E, F)``.

    Even coordinates: ``vec(phi0), vec(phi1)``; odd coordinates ``vec(t0), vec(t1)``
    with ``t0 : E^0 -> F^1`` and ``t1 : E^1 -> F^0`` (row-major vec).
    """

    def __init__(self, E: MatrixFactorization, F: MatrixFactorization):
        if E.tower != F.tower:
            raise TowerMismatch("hom between different towers")
        self.E, self.F = E, F
        K = self.field = E.field
        r, q = E.rank, F.rank
        I_r, I_q = PolyMatrix.identity(K, r), PolyMatrix.identity(K, q)
        L = lambda A: A.kron(I_r)  # noqa: E731  left multiplication X -> A X
        R = lambda B: I_q.kron(B.T)  # noqa: E731  right multiplication X -> X B
        n = q * r
        # odd -> even: t -> delta_F t + t delta_E
        #   E^0 -> F^0: h_F t0 + t1 d_E ;  E^1 -> F^1: d_F t1 + t0 h_E
        self.odd_to_even = PolyMatrix.block(K, [[L(F.h), R(E.d)], [R(E.h), L(F.d)]], [n, n], [n, n])
        # even -> odd: f -> delta_F f - f delta_E
        #   E^0 -> F^1: d_F phi0 - phi1 d_E ;  E^1 -> F^0: h_F phi1 - phi0 h_E
        self.even_to_odd = PolyMatrix.block(K, [[L(F.d), -R(E.d)], [-R(E.h), L(F.h)]], [n, n], [n, n])

    def even_vector(self, f: MfMorphism) -> PolyMatrix:
        e = _vec(f.phi0) + _vec(f.phi1)
        return PolyMatrix._make(self.field, len(e), 1, tuple(e))

    def odd_pair(self, v: PolyMatrix) -> tuple[PolyMatrix, PolyMatrix]:
        q, r = self.F.rank, self.E.rank
        return _unvec(self.field, v, 0, q, r), _unvec(self.field, v, q * r, q, r)

    def h0(self) -> FgModulePresentation:
        n = 2 * self.E.rank * self.F.rank
        if n == 0:
            return FgModulePresentation()
        table: CohomologyTable = complex_cohomology({0: n}, {-1: self.odd_to_even, 0: self.even_to_odd})
        return table[0]


def mf_hom_classes(E: MatrixFactorization, F: MatrixFactorization) -> FgModulePresentation:
    """``H^0`` of the hom complex: homotopy classes of maps ``E -> F``."""
    return MfHom(E, F).h0()


@dataclass(frozen=True)
class Contraction:
    """Odd maps ``t0 : E^0 -> E^1`` and ``t1 : E^1 -> E^0`` with ``h t0 + t1 d = 1`` and ``d t1 + t0 h = 1``."""

    t0: PolyMatrix
    t1: PolyMatrix


def _check_contraction(E: MatrixFactorization, c: Contraction) -> bool:
    I = PolyMatrix.identity(E.field, E.rank)
    return E.h @ c.t0 + c.t1 @ E.d == I and E.d @ c.t1 + c.t0 @ E.h == I


def is_contractible(E: MatrixFactorization, method: str = "reduced") -> Contraction | None:
    """Return a contraction of ``id_E`` or ``None``.

    ``reduced`` diagonalises ``d`` by a Smith form; ``d h = pi`` then splits ``E``
    into rank one factorizations ``(s^a, u s^(e-a))``, and such a piece is
    contractible exactly when ``a`` is ``0`` or ``e``. ``direct`` solves the full
    linear system for ``(t0, t1)``. Both verify the witness they return.
    """
    if validate_mf(E):
        raise StructuralViolation("is_contractible needs a valid factorization")
    K = E.field
    if E.is_zero():
        z = PolyMatrix.zero(K, 0, 0)
        return Contraction(z, z)
    if method == "direct":
        H = MfHom(E, E)
        sol = solve_linear(H.odd_to_even, H.even_vector(E.identity()))
        if not sol.solvable:
            return None
        c = Contraction(*H.odd_pair(sol.x))
    elif method == "reduced":
        c = _reduced_contraction(E)
        if c is None:
            return None
    else:
        raise ValueError(f"unknown method {method!r}")
    if not _check_contraction(E, c):
        raise ConventionViolation("contraction witness fails verification")
    return c


def _reduced_contraction(E: MatrixFactorization) -> Contraction | None:
    K, T = E.field, E.tower
    snf = smith_normal_form(E.d, with_inverse=True)
    n = E.rank
    if snf.rank != n:
        raise StructuralViolation("d is not injective")
    diag = snf.diagonal
    t0p, t1p = [], []
    for f in diag:
        a = f.degree
        if f != T.s**a:
            raise StructuralViolation(f"invariant factor {f} does not divide pi")
        if a == 0:
            t0p.append(()), t1p.append(f.coeffs)
        elif a == T.e:
            t0p.append((K.inv(T.u),)), t1p.append(())
        else:
            return None
    # U d V = D, so E is isomorphic to (D, V^-1 h U^-1) via V on E^0 and U^-1 on E^1
    U_inv = solve_linear(snf.U, PolyMatrix.identity(K, n)).x
    t0 = U_inv @ PolyMatrix.diagonal(K, t0p) @ snf.V_inv
    t1 = snf.V @ PolyMatrix.diagonal(K, t1p) @ snf.U
    return Contraction(t0, t1)
