"""Matrix factorizations: shift, cone, fold/unfold, contractibility, hom classes."""

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from koszul_mf import (
    GF,
    QQ,
    MatrixFactorization,
    MfMorphism,
    NotMfMorphism,
    OneHomotopyModule,
    PolyMatrix,
    RingTower,
    StructuralViolation,
    cone,
    direct_sum,
    fold,
    is_contractible,
    mf_cone,
    mf_hom_classes,
    mf_shift,
    pushforward_a,
    shift,
    unfold,
    validate,
    validate_mf,
)
from koszul_mf.generators import random_chain_map, random_mf, random_one_two_term, random_short_one, random_tower, random_two_two_term
from koszul_mf.mf import mf_direct_sum
from koszul_mf.ring import FgModulePresentation, Poly


def one(x, F=QQ):
    return PolyMatrix.from_rows(F, [[x]])


def rank_one(T, a, c=1):
    """``(c s^a, u c^-1 s^(e-a))``."""
    F = T.field
    return MatrixFactorization(T, one(Poly.monomial(F, a, c), F), one(Poly.monomial(F, T.e - a, F.mul(T.u, F.inv(F(c)))), F))


def test_shift_examples(T2):
    E = MatrixFactorization.trivial(T2)
    S = mf_shift(E)
    assert S.d == -T2.pi_id(1) and S.h == -PolyMatrix.identity(QQ, 1)
    rng = random.Random(1)
    for _ in range(40):
        T = random_tower(rng, QQ, 3)
        E = random_mf(rng, T, rng.randint(1, 3))
        assert validate_mf(mf_shift(E)) == []
        assert mf_shift(mf_shift(E)) == E


def test_non_square_is_structural(T2):
    with pytest.raises(StructuralViolation):
        MatrixFactorization(T2, PolyMatrix.zero(QQ, 2, 1), PolyMatrix.zero(QQ, 1, 2))


def test_cone_basics(T2):
    E = rank_one(T2, 1)
    C = mf_cone(E.identity())
    assert validate_mf(C.cone) == []
    assert is_contractible(C.cone) is not None
    Z = MatrixFactorization.zero(T2)
    C0 = mf_cone(MfMorphism(Z, E, PolyMatrix.zero(QQ, 1, 0), PolyMatrix.zero(QQ, 1, 0)))
    assert C0.cone == mf_direct_sum(E, Z)
    bad = MfMorphism(E, E, one(1), PolyMatrix.zero(QQ, 1, 1))
    with pytest.raises(NotMfMorphism):
        mf_cone(bad)


def test_cone_random_validity():
    rng = random.Random(2)
    for _ in range(30):
        T = random_tower(rng, GF(5), 3)
        E, F = random_one_two_term(rng, T, rng.randint(1, 2)), random_one_two_term(rng, T, rng.randint(1, 2))
        phi = fold(random_chain_map(rng, E, F))
        C = mf_cone(phi)
        assert validate_mf(C.cone) == []
        assert C.inclusion.is_valid() and C.projection.is_valid()
        comp = C.projection @ C.inclusion
        assert comp.phi0.is_zero() and comp.phi1.is_zero()


def test_fold_two_term_is_literal():
    rng = random.Random(3)
    for _ in range(20):
        T = random_tower(rng, QQ, 3)
        N = random_one_two_term(rng, T, rng.randint(1, 3))
        E = fold(N)
        assert E.d == N.dmap(0) and E.h == N.h_at(1)


def test_fold_additive_and_even_shift_invariant():
    rng = random.Random(4)
    for _ in range(30):
        T = random_tower(rng, QQ, 3)
        M, N = random_short_one(rng, T, 1), random_short_one(rng, T, 1)
        assert validate_mf(fold(M)) == []
        assert fold(shift(M, 2)) == fold(M)
        S = fold(direct_sum(M, N))
        assert S.rank == fold(M).rank + fold(N).rank
        assert validate_mf(S) == []


def test_fold_sum_of_two_term_objects():
    rng = random.Random(5)
    for _ in range(20):
        T = random_tower(rng, QQ, 3)
        M, N = random_one_two_term(rng, T, rng.randint(1, 2)), random_one_two_term(rng, T, rng.randint(1, 2))
        assert fold(direct_sum(M, N)) == mf_direct_sum(fold(M), fold(N))


def test_round_trips():
    rng = random.Random(6)
    for _ in range(50):
        T = random_tower(rng, rng.choice((QQ, GF(5))), 3)
        E = random_mf(rng, T, rng.randint(1, 3))
        U = unfold(E)
        assert validate(U) == [] and U.h1 == U.h2
        assert fold(pushforward_a(1, U)) == E
        M = random_two_two_term(rng, T, rng.randint(1, 3))
        assert unfold(fold(pushforward_a(1, M))) == M


def test_unfold_of_trivial_is_perfect(T2):
    from koszul_mf import is_perfect

    assert is_perfect(pushforward_a(1, unfold(MatrixFactorization.trivial(T2))))


def test_fold_of_cone_is_mf_cone():
    # fold(cone) has even part (F^0, E^1) and odd part (E^0, F^1) in degree order;
    # mf_cone orders them (E^1, F^0) and (F^1, E^0). The swap is an isomorphism.
    rng = random.Random(7)
    for _ in range(30):
        T = random_tower(rng, QQ, 3)
        E, F = random_one_two_term(rng, T, rng.randint(1, 2)), random_one_two_term(rng, T, rng.randint(1, 2))
        phi = random_chain_map(rng, E, F)
        A, B = fold(cone(phi).cone), mf_cone(fold(phi)).cone
        K = T.field
        I = lambda n: PolyMatrix.identity(K, n)  # noqa: E731
        e0, e1, f0, f1 = E.rank(0), E.rank(1), F.rank(0), F.rank(1)
        P0 = PolyMatrix.block(K, [[None, I(e1)], [I(f0), None]], [e1, f0], [f0, e1])
        P1 = PolyMatrix.block(K, [[None, I(f1)], [I(e0), None]], [f1, e0], [e0, f1])
        assert P1 @ A.d == B.d @ P0
        assert P0 @ A.h == B.h @ P1


# -- contractibility --------------------------------------------------------------------------


def test_contractible_examples(T2):
    assert is_contractible(MatrixFactorization.trivial(T2)) is not None
    assert is_contractible(MatrixFactorization.trivial(T2, swapped=True), "direct") is not None
    for e in range(2, 5):
        for u in (1, 2):
            T = RingTower(QQ, e, u)
            for a in range(1, e):
                E = rank_one(T, a)
                assert validate_mf(E) == []
                assert is_contractible(E) is None
                assert is_contractible(E, "direct") is None
                H = mf_hom_classes(E, E)
                assert not H.is_zero() and H.is_torsion()


def test_sum_of_contractibles():
    rng = random.Random(8)
    for _ in range(20):
        T = random_tower(rng, QQ, 3)
        E = random_mf(rng, T, rng.randint(1, 2), None)
        exps = [rng.choice((0, T.e)) for _ in range(rng.randint(1, 3))]
        C1 = random_mf(rng, T, len(exps), exps)
        C2 = random_mf(rng, T, 1, [rng.choice((0, T.e))])
        S = mf_direct_sum(C1, C2)
        w = is_contractible(S)
        assert w is not None
        assert (is_contractible(E) is None) == (is_contractible(mf_direct_sum(E, S)) is None)


@given(st.integers(0, 2**32))
def test_contractibility_oracles_agree(seed):
    rng = random.Random(seed)
    T = random_tower(rng, rng.choice((QQ, GF(5))), 3)
    E = random_mf(rng, T, rng.randint(1, 3))
    a = is_contractible(E)
    b = is_contractible(E, "direct")
    assert (a is None) == (b is None) == (not mf_hom_classes(E, E).is_zero())


def test_hom_classes_examples(T2):
    assert mf_hom_classes(MatrixFactorization.trivial(T2), MatrixFactorization.trivial(T2)).is_zero()
    E = rank_one(T2, 1)
    # End of (s, s): even maps (a, a), odd maps kill through s(t0 + t1); classes k[s]/(s)
    assert mf_hom_classes(E, E) == FgModulePresentation(0, (T2.s,))
    rng = random.Random(9)
    for _ in range(20):
        T = random_tower(rng, QQ, 3)
        A, B = random_mf(rng, T, rng.randint(1, 2)), random_mf(rng, T, rng.randint(1, 2))
        assert mf_hom_classes(A, B) == mf_hom_classes(mf_shift(A), mf_shift(B))


def test_unfold_zero(T2):
    assert unfold(MatrixFactorization.zero(T2)).is_zero()
    assert fold(OneHomotopyModule.zero(T2)) == MatrixFactorization.zero(T2)
