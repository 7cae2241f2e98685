"""Strict functors between the one- and two-homotopy categories.

``a_i^*`` sends ``(E, d, h)`` to ``E + E[1]`` (degree ``m`` holds ``E^m + E^{m+1}``)
with

    d   = [[d, pi], [0, -d]]
    h_i = [[h, 0], [0, -h]]
    h_j = [[0, 0], [1, 0]]      (j the other index)

and ``a_{i*}`` forgets ``h_j``. The counit ``a_2^* a_{2*} E -> E`` is
``(x, y) -> x + h_1 y``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dg import (
    Cone,
    DgMorphism,
    KoszulModule,
    OneHomotopyModule,
    TwoHomotopyModule,
    _sign,
    _signed,
    cone,
    is_quasi_iso,
    shift,
    validate,
)
from .errors import ConventionViolation, InvalidObject, NeedsReduction, NotARoot, StructuralViolation
from .ring import PolyMatrix, smith_normal_form
from .tower import RingTower

MAX_TERMS = 3


def _check_index(i: int):
    if i not in (1, 2):
        raise ValueError(f"index must be 1 or 2, got {i}")


def pushforward_a(i: int, M) -> OneHomotopyModule | DgMorphism:
    """``a_{i*}``: keep ``h_i`` and forget the other homotopy. Accepts modules or morphisms."""
    _check_index(i)
    if isinstance(M, DgMorphism):
        src, tgt = pushforward_a(i, M.source), pushforward_a(i, M.target)
        return DgMorphism(src, tgt, M.degree, M.as_dict())
    if not isinstance(M, TwoHomotopyModule):
        raise TypeError("pushforward_a expects a two-homotopy module")
    return OneHomotopyModule(M.tower, M.min_degree, M.ranks, M.d, [M.hs[i - 1]])


def pullback_a(i: int, M) -> TwoHomotopyModule | DgMorphism:
    """``a_i^*``. On a degree ``n`` morphism ``phi`` this is ``diag(phi, (-1)^n phi)``."""
    _check_index(i)
    if isinstance(M, DgMorphism):
        src, tgt = pullback_a(i, M.source), pullback_a(i, M.target)
        E, F, n = M.source, M.target, M.degree
        K = E.field
        comps = {}
        for m in src.degrees:
            comps[m] = PolyMatrix.block(
                K,
                [[M.component(m), None], [None, _signed(M.component(m + 1), _sign(n))]],
                [F.rank(m + n), F.rank(m + n + 1)],
                [E.rank(m), E.rank(m + 1)],
            )
        return DgMorphism(src, tgt, n, comps)
    if not isinstance(M, OneHomotopyModule):
        raise TypeError("pullback_a expects a one-homotopy module")
    if M.is_zero():
        return TwoHomotopyModule.zero(M.tower)
    K = M.field
    pi = M.tower.pi
    degs = range(M.min_degree - 1, M.max_degree + 1)
    d, hi, hj = [], [], []
    for m in degs:
        r0, r1, r2 = M.rank(m), M.rank(m + 1), M.rank(m + 2)
        d.append(PolyMatrix.block(K, [[M.dmap(m), PolyMatrix.scalar(K, r1, pi) if r1 else None], [None, -M.dmap(m + 1)]], [r1, r2], [r0, r1]))
        rows = [M.rank(m - 1), r0]
        hi.append(PolyMatrix.block(K, [[M.h_at(m), None], [None, -M.h_at(m + 1)]], rows, [r0, r1]))
        hj.append(PolyMatrix.block(K, [[None, None], [PolyMatrix.identity(K, r0) if r0 else None, None]], rows, [r0, r1]))
    hs = [hi, hj] if i == 1 else [hj, hi]
    return TwoHomotopyModule(M.tower, degs.start, [M.rank(m) + M.rank(m + 1) for m in degs], d, hs)


def diagonal_pushforward(M) -> TwoHomotopyModule | DgMorphism:
    """``delta_*``: ``(E, d, h) -> (E, d, {h, h})``; the identity on morphisms."""
    if isinstance(M, DgMorphism):
        return DgMorphism(diagonal_pushforward(M.source), diagonal_pushforward(M.target), M.degree, M.as_dict())
    if not isinstance(M, OneHomotopyModule):
        raise TypeError("diagonal_pushforward expects a one-homotopy module")
    return TwoHomotopyModule(M.tower, M.min_degree, M.ranks, M.d, [M.h, M.h])


def _require_short(M: KoszulModule):
    if M.span > MAX_TERMS:
        raise NeedsReduction(f"object spans {M.span} degrees; at most {MAX_TERMS} are supported (split it first)")


def counit(M: TwoHomotopyModule) -> DgMorphism:
    """The counit ``a_2^* a_{2*} M -> M``, ``(x, y) -> x + h_1 y`` in each degree."""
    _require_short(M)
    P = pullback_a(2, pushforward_a(2, M))
    K = M.field
    comps = {}
    for m in P.degrees:
        comps[m] = PolyMatrix.block(K, [[PolyMatrix.identity(K, M.rank(m)) if M.rank(m) else None, M.hmap(0, m + 1)]], [M.rank(m)], [M.rank(m), M.rank(m + 1)])
    phi = DgMorphism(P, M, 0, comps)
    if not phi.is_chain_map():
        raise ConventionViolation("counit is not a chain map")
    return phi


@dataclass(frozen=True)
class PeriodicityWitness:
    """Data certifying ``M[2] ~ cone(a_2^* a_{2*} M -> M)``.

    ``null_homotopy`` is the canonical degree ``-1`` map ``x -> (0, x)`` with
    ``D(null_homotopy) = inclusion o counit``, so the triangle composite vanishes
    in the homotopy category.
    """

    source: TwoHomotopyModule
    counit: DgMorphism
    triangle: Cone
    comparison: DgMorphism
    null_homotopy: DgMorphism
    quasi_iso: bool

    @property
    def triangle_cone(self) -> TwoHomotopyModule:
        return self.triangle.cone


def _comparison(M: TwoHomotopyModule, C: KoszulModule) -> DgMorphism:
    # E[2]^m = E^{m+2} -> C^m = E^m + E^{m+1} + E^{m+2},  z -> (0, h_1 z, -z)
    K = M.field
    M2 = shift(M, 2)
    comps = {}
    for m in M2.degrees:
        r = M.rank(m + 2)
        comps[m] = PolyMatrix.block(
            K,
            [[None], [M.hmap(0, m + 2)], [-PolyMatrix.identity(K, r)]],
            [M.rank(m), M.rank(m + 1), r],
            [r],
        )
    return DgMorphism(M2, C, 0, comps)


def periodicity_witness(M: TwoHomotopyModule) -> PeriodicityWitness:
    """Build the exact triangle ``a_2^* a_{2*} M -> M -> M[2]`` and certify it.

    Raises :class:`ConventionViolation` if any identity fails; such a failure
    would mean a sign bug, so it is never turned into a ``False``.
    """
    eps = counit(M)
    tri = cone(eps)
    C = tri.cone
    for name, obj in (("cone", C), ("pullback", eps.source)):
        if validate(obj):
            raise ConventionViolation(f"{name} of the counit does not validate")
    comp = _comparison(M, C)
    if not comp.is_chain_map():
        raise ConventionViolation("comparison map is not a chain map")
    if not is_quasi_iso(comp):
        raise ConventionViolation("comparison map is not a quasi-isomorphism")
    P = eps.source
    K = M.field
    xi = DgMorphism(P, C, -1, {m: PolyMatrix.block(K, [[None], [PolyMatrix.identity(K, P.rank(m))]], [M.rank(m - 1), P.rank(m)], [P.rank(m)]) for m in P.degrees})
    if xi.differential() != tri.inclusion @ eps or not xi.is_equivariant():
        raise ConventionViolation("canonical null-homotopy of the triangle composite fails")
    return PeriodicityWitness(M, eps, tri, comp, xi, True)


# -- two-term reduction ------------------------------------------------------------


@dataclass(frozen=True)
class ThreeTermSplit:
    sub: TwoHomotopyModule  # A = (E^{n-1} -> ker d^n)
    quotient: TwoHomotopyModule  # B = (E^n / ker d^n -> E^{n+1})
    inclusion: DgMorphism
    projection: DgMorphism

    def __iter__(self):
        return iter((self.sub, self.quotient, self.inclusion, self.projection))


def split_three_term(M: TwoHomotopyModule) -> ThreeTermSplit:
    """Write a three-term ``M`` (degrees ``n-1, n, n+1``) as an extension ``0 -> A -> M -> B -> 0``.

    ``A^n = Z = ker d^n`` and ``B^n = E^n / Z``; both are free with bases read
    off one Smith form of ``d^n``. The induced homotopies are the restrictions
    to ``Z`` and the descents to ``E^n / Z``.
    """
    if M.span > 3:
        raise NeedsReduction(f"object spans {M.span} degrees")
    if M.span != 3:
        raise InvalidObject(f"split_three_term needs exactly three degrees, got {M.span}")
    K = M.field
    n = M.min_degree + 1
    dn = M.dmap(n)
    snf = smith_normal_form(dn, with_inverse=True)
    r, rn = snf.rank, M.rank(n)
    cols = range(rn)
    Zb = snf.V.submatrix(cols, range(r, rn))
    Zr = snf.V_inv.submatrix(range(r, rn), cols)
    Cb = snf.V.submatrix(cols, range(r))
    Pr = snf.V_inv.submatrix(range(r), cols)
    z = rn - r
    hs_n = [M.hmap(k, n) for k in range(2)]
    hs_n1 = [M.hmap(k, n + 1) for k in range(2)]

    dA = Zr @ M.dmap(n - 1)
    if Zb @ dA != M.dmap(n - 1):
        raise StructuralViolation("image of d^{n-1} is not contained in ker d^n")
    A = TwoHomotopyModule(M.tower, n - 1, [M.rank(n - 1), z], [dA, PolyMatrix.zero(K, 0, z)], [[PolyMatrix.zero(K, 0, M.rank(n - 1)), h @ Zb] for h in hs_n])
    B = TwoHomotopyModule(M.tower, n, [r, M.rank(n + 1)], [dn @ Cb, PolyMatrix.zero(K, 0, M.rank(n + 1))], [[PolyMatrix.zero(K, 0, r), Pr @ h] for h in hs_n1])
    for name, piece in (("sub", A), ("quotient", B)):
        bad = validate(piece)
        if bad:
            raise StructuralViolation(f"induced structure on the {name} object fails: {bad[0]}")
    inc = DgMorphism(A, M, 0, {n - 1: PolyMatrix.identity(K, M.rank(n - 1)), n: Zb})
    proj = DgMorphism(M, B, 0, {n: Pr, n + 1: PolyMatrix.identity(K, M.rank(n + 1))})
    if not inc.is_chain_map() or not proj.is_chain_map():
        raise StructuralViolation("extension maps are not chain maps")
    if not (proj @ inc).is_zero():
        raise StructuralViolation("projection o inclusion is nonzero")
    if Zr @ Zb != PolyMatrix.identity(K, z) or Pr @ Cb != PolyMatrix.identity(K, r):
        raise StructuralViolation("extension is not degreewise split")
    return ThreeTermSplit(A, B, inc, proj)


# -- twists and base change -----------------------------------------------------------


def _retarget(obj, fn, tower: RingTower):
    from .mf import MatrixFactorization

    if isinstance(obj, KoszulModule):
        return obj.map_matrices(fn, tower)
    if isinstance(obj, MatrixFactorization):
        return MatrixFactorization(tower, fn(obj.d), fn(obj.h))
    raise TypeError(f"cannot twist {type(obj).__name__}")


def galois_twist(M, c):
    """Substitute ``s -> c s`` everywhere; needs ``c^e = 1`` so that ``pi_K`` is fixed."""
    T = M.tower
    c = T.field(c)
    if T.field.power(c, T.e) != T.field.one:
        raise NotARoot(f"{c} is not an e-th root of unity (e = {T.e}) in {T.field}")
    return _retarget(M, lambda m: m.substitute_monomial(c, 1), T)


def extended_tower(T: RingTower, e2: int, u2=1) -> RingTower:
    if e2 < 1:
        raise ValueError("extension degree must be >= 1")
    u2 = T.field(u2)
    if not u2:
        raise ValueError("u2 must be nonzero")
    return RingTower(T.field, T.e * e2, T.field.mul(T.u, T.field.power(u2, T.e)), T.chain + (T.e * e2,))


def extend_scalars(M, e2: int, u2=1):
    """Base change along ``s -> u2 * s'^{e2}``; the new tower has ``pi_K = u u2^e s'^{e e2}``."""
    T2 = extended_tower(M.tower, e2, u2)
    u2 = M.field(u2)
    if e2 == 1 and u2 == M.field.one:
        return _retarget(M, lambda m: m, T2)
    return _retarget(M, lambda m: m.substitute_monomial(u2, e2), T2)
