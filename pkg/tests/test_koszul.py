"""Functors between the two module categories, periodicity, splitting, twists."""

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from koszul_mf import (
    GF,
    QQ,
    DgMorphism,
    InvalidObject,
    NeedsReduction,
    NotARoot,
    OneHomotopyModule,
    PolyMatrix,
    RingTower,
    TwoHomotopyModule,
    cohomology,
    cone,
    counit,
    diagonal_pushforward,
    direct_sum,
    extend_scalars,
    fold,
    galois_twist,
    is_quasi_iso,
    periodicity_witness,
    pullback_a,
    pushforward_a,
    shift,
    split_three_term,
    validate,
)
from koszul_mf.dg import HomComplex
from koszul_mf.generators import (
    random_capped_two,
    random_chain_map,
    random_one_two_term,
    random_short_one,
    random_three_term_two,
    random_tower,
    random_two_two_term,
)


def one(x, F=QQ):
    return PolyMatrix.from_rows(F, [[x]])


def ss_one(T):
    return OneHomotopyModule.two_term(T, one(T.s, T.field), one(T.s, T.field))


def ss_two(T):
    return diagonal_pushforward(ss_one(T))


def chi(M):
    return sum((-1) ** n * g.length for n, g in cohomology(M).items())


# -- the functors ----------------------------------------------------------------------


def test_pushforward_of_basic_object(T2):
    M = TwoHomotopyModule.two_term(T2, one(T2.s), one(T2.s), one(T2.s))
    assert pushforward_a(1, M) == ss_one(T2)


def test_pushforward_and_diagonal_identities():
    rng = random.Random(1)
    for _ in range(30):
        T = random_tower(rng, QQ, 3)
        N = random_short_one(rng, T, 1)
        D = diagonal_pushforward(N)
        assert validate(D) == [] and D.h1 == D.h2
        assert pushforward_a(1, D) == N and pushforward_a(2, D) == N
        M1, M2 = random_capped_two(rng, T), random_capped_two(rng, T)
        for i in (1, 2):
            assert pushforward_a(i, direct_sum(M1, M2)) == direct_sum(pushforward_a(i, M1), pushforward_a(i, M2))


def test_pullback_shape_and_validity(T2):
    P = pullback_a(1, ss_one(T2))
    assert validate(P) == []
    assert P.ranks == (1, 2, 1) and P.min_degree == -1
    rng = random.Random(2)
    for _ in range(30):
        T = random_tower(rng, QQ, 3)
        N = random_short_one(rng, T, 1)
        for i in (1, 2):
            P = pullback_a(i, N)
            assert validate(P) == []
            assert P.span == N.span + 1
            assert sum(P.ranks) == 2 * sum(N.ranks)


def test_pullback_cohomology_is_cone_of_pi():
    rng = random.Random(3)
    for _ in range(30):
        T = random_tower(rng, GF(5), 3)
        N = random_short_one(rng, T, 1)
        pi = N.identity().scale(T.pi)
        for i in (1, 2):
            assert cohomology(pullback_a(i, N)) == cohomology(cone(pi).cone)


def test_functoriality():
    rng = random.Random(4)
    for _ in range(25):
        T = random_tower(rng, QQ, 2)
        E, F, G = (random_short_one(rng, T, 1) for _ in range(3))
        f, g = random_chain_map(rng, E, F), random_chain_map(rng, F, G)
        for i in (1, 2):
            assert pullback_a(i, E.identity()) == pullback_a(i, E).identity()
            assert pullback_a(i, g @ f) == pullback_a(i, g) @ pullback_a(i, f)
            assert pullback_a(i, f).is_chain_map()
        D = diagonal_pushforward
        assert D(g @ f) == D(g) @ D(f) and D(E.identity()) == D(E).identity()
        M, N = random_capped_two(rng, T, 2), random_capped_two(rng, T, 2)
        phi = random_chain_map(rng, M, N)
        for i in (1, 2):
            assert pushforward_a(i, phi).is_chain_map()
            assert pushforward_a(i, M.identity()) == pushforward_a(i, M).identity()


def test_adjunction_counts():
    # H^0 Hom(a_i^* M, N) and H^0 Hom(M, a_{i*} N) have the same invariant factors
    rng = random.Random(5)
    for _ in range(30):
        T = random_tower(rng, QQ, 2)
        i = rng.choice((1, 2))
        M = random_short_one(rng, T, 1) if rng.random() < 0.5 else random_one_two_term(rng, T, rng.randint(1, 2))
        N = random_capped_two(rng, T, 2)
        assert HomComplex(pullback_a(i, M), N).h0() == HomComplex(M, pushforward_a(i, N)).h0()


# -- counit and two-periodicity -------------------------------------------------------------


def test_counit_on_two_term(T2):
    M = ss_two(T2)
    u = counit(M)
    assert u.is_chain_map() and u.is_equivariant()
    # degree 0: [id | h1] from (E^0 + E^1) to E^0
    assert u.component(0) == PolyMatrix.from_rows(QQ, [[1, T2.s]])
    Z = TwoHomotopyModule.zero(T2)
    assert counit(Z).is_zero()


def test_periodicity_on_basic_object(T2):
    w = periodicity_witness(ss_two(T2))
    assert w.quasi_iso and is_quasi_iso(w.comparison)
    assert validate(w.triangle_cone) == []
    assert w.comparison.source == shift(ss_two(T2), 2)


def test_periodicity_on_perfect_object(T2):
    M = TwoHomotopyModule.two_term(T2, one(T2.s**2), one(1), one(1))
    w = periodicity_witness(M)
    assert w.quasi_iso
    for g in list(cohomology(M).values()) + list(cohomology(shift(M, 2)).values()):
        assert all(f.divides(T2.pi) for f in g.torsion_invariants)


def test_periodicity_zero(T2):
    w = periodicity_witness(TwoHomotopyModule.zero(T2))
    assert w.triangle_cone.is_zero() and w.quasi_iso


@given(st.integers(0, 2**32))
def test_periodicity_random(seed):
    rng = random.Random(seed)
    T = random_tower(rng, rng.choice((QQ, GF(5))), 3)
    M = random_capped_two(rng, T)
    w = periodicity_witness(M)
    assert w.quasi_iso
    assert counit(M).is_equivariant()


def test_needs_reduction(T2):
    M4 = pullback_a(1, pushforward_a(1, random_three_term_two(random.Random(0), T2, 1, 1)))
    assert M4.span == 4
    with pytest.raises(NeedsReduction):
        counit(M4)
    with pytest.raises(NeedsReduction):
        periodicity_witness(M4)
    with pytest.raises(NeedsReduction):
        split_three_term(M4)


# -- three-term splitting --------------------------------------------------------------------


def test_split_recovers_summands():
    rng = random.Random(6)
    for _ in range(20):
        T = random_tower(rng, QQ, 3)
        A = random_two_two_term(rng, T, rng.randint(1, 2), -1)
        B = random_two_two_term(rng, T, rng.randint(1, 2), 0)
        sub, quo, inc, proj = split_three_term(direct_sum(A, B))
        assert cohomology(sub) == cohomology(A)
        assert cohomology(quo) == cohomology(B)


def test_split_bookkeeping():
    rng = random.Random(7)
    for _ in range(40):
        T = random_tower(rng, rng.choice((QQ, GF(5))), 3)
        M = random_three_term_two(rng, T, rng.randint(1, 2), rng.randint(1, 2), rng.randint(-1, 1))
        sub, quo, inc, proj = split_three_term(M)
        assert validate(sub) == [] and validate(quo) == []
        assert sub.span == 2 and quo.span == 2
        assert (proj @ inc).is_zero()
        for n in M.degrees:
            assert sub.rank(n) + quo.rank(n) == M.rank(n)
        assert chi(pushforward_a(1, M)) == chi(pushforward_a(1, sub)) + chi(pushforward_a(1, quo))


def test_split_rejects_two_terms(T2):
    with pytest.raises(InvalidObject):
        split_three_term(ss_two(T2))


# -- Galois twists and scalar extension ---------------------------------------------------------


def test_twist_example_over_f5():
    T = RingTower(GF(5), 2, 1)
    F = T.field
    M = ss_one(T)
    W = galois_twist(M, 4)
    assert W == OneHomotopyModule.two_term(T, one(T.s.substitute_monomial(4), F), one(T.s.substitute_monomial(4), F))
    assert W.dmap(0)[0, 0].coeffs == (0, 4)
    assert validate(W) == []
    assert galois_twist(M, 1) == M
    with pytest.raises(NotARoot):
        galois_twist(M, 2)


def test_twist_composition_and_compatibility():
    T = RingTower(GF(5), 4, 2)  # the 4th roots of unity are all of F_5^*
    rng = random.Random(8)
    for _ in range(20):
        M = random_capped_two(rng, T)
        c, c2 = rng.randint(1, 4), rng.randint(1, 4)
        assert galois_twist(galois_twist(M, c), c2) == galois_twist(M, c * c2 % 5)
        W = galois_twist(M, c)
        assert validate(W) == []
        assert galois_twist(shift(M, 1), c) == shift(W, 1)
        N = pushforward_a(1, M)
        assert galois_twist(fold(N), c) == fold(galois_twist(N, c))
        phi = random_chain_map(rng, N, N)
        C = cone(phi).cone
        tphi = DgMorphism(galois_twist(N, c), galois_twist(N, c), 0, {j: m.substitute_monomial(c) for j, m in phi.as_dict().items()})
        assert galois_twist(C, c) == cone(tphi).cone
        HM, HW = cohomology(M), cohomology(W)
        assert set(HM) == set(HW)
        for n in HM:
            assert [f.degree for f in HM[n].torsion_invariants] == [f.degree for f in HW[n].torsion_invariants]


def test_extend_scalars():
    # (s, s) is not a factorization of pi = s when e = 1, so the extension is
    # exercised on (s, 1) over e = 1 and on (s, s) over e = 2
    T1 = RingTower(QQ, 1, 1)
    assert validate(ss_one(T1))
    M = OneHomotopyModule.two_term(T1, one(T1.s), one(1))
    X = extend_scalars(M, 2)
    assert X.tower == RingTower(QQ, 2, 1)
    assert X == OneHomotopyModule.two_term(X.tower, one(X.tower.s**2), one(1))
    assert validate(X) == []
    T2 = RingTower(QQ, 2, 1)
    Y = extend_scalars(ss_one(T2), 2)
    assert Y.tower == RingTower(QQ, 4, 1)
    assert Y == OneHomotopyModule.two_term(Y.tower, one(Y.tower.s**2), one(Y.tower.s**2))
    assert validate(Y) == []
    assert extend_scalars(M, 1) == M
    rng = random.Random(9)
    for _ in range(15):
        T = random_tower(rng, QQ, 2)
        N = random_capped_two(rng, T, 2)
        a, b = rng.randint(1, 3), rng.randint(1, 3)
        u1, u2 = rng.choice((1, 2, -3)), rng.choice((1, 5))
        twice = extend_scalars(extend_scalars(N, a, u1), b, u2)
        assert twice == extend_scalars(N, a * b, QQ(u1) * QQ(u2) ** a)
        assert validate(twice) == []
        assert twice.tower.chain == (T.e, T.e * a, T.e * a * b)
