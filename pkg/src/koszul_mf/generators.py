"""Seeded random valid objects for property tests and the self-test battery.

Every generator takes a ``random.Random`` and builds objects whose validity
follows from the construction; callers still validate, since that is the point.
Coefficients are kept small so that rational arithmetic stays cheap.
"""

from __future__ import annotations

import random

from .dg import DgMorphism, HomComplex, KoszulModule, OneHomotopyModule, TwoHomotopyModule, validate
from .errors import ConventionViolation
from .koszul import pullback_a, pushforward_a
from .mf import MatrixFactorization
from .ring import FieldSpec, PolyMatrix, kernel_basis, solve_linear
from .ring.poly import t_strip
from .tower import RingTower


def random_scalar(rng: random.Random, F: FieldSpec, nonzero: bool = False):
    while True:
        x = F(rng.randint(-3, 3)) if F.p == 0 else F(rng.randrange(F.p))
        if x or not nonzero:
            return x


def random_poly_raw(rng: random.Random, F: FieldSpec, max_deg: int = 2) -> tuple:
    if rng.random() < 0.3:
        return ()
    return t_strip([random_scalar(rng, F) for _ in range(rng.randint(0, max_deg) + 1)])


def random_matrix(rng: random.Random, F: FieldSpec, rows: int, cols: int, max_deg: int = 2) -> PolyMatrix:
    return PolyMatrix._make(F, rows, cols, tuple(random_poly_raw(rng, F, max_deg) for _ in range(rows * cols)))


def random_tower(rng: random.Random, F: FieldSpec, emax: int = 3, emin: int = 1) -> RingTower:
    return RingTower(F, rng.randint(emin, emax), random_scalar(rng, F, nonzero=True))


def random_unimodular(rng: random.Random, F: FieldSpec, n: int, steps: int | None = None) -> tuple[PolyMatrix, PolyMatrix]:
    """A random ``P`` with ``det P`` a unit, returned together with ``P^-1``."""
    P = PolyMatrix.identity(F, n)
    Pi = P
    if n == 0:
        return P, Pi
    steps = n + 1 if steps is None else steps
    for _ in range(steps):
        kind = rng.random()
        if kind < 0.7 and n > 1:
            i, j = rng.sample(range(n), 2)
            q = random_poly_raw(rng, F, 1) or (F.one,)
            E = _elementary(F, n, i, j, q)
            Ei = _elementary(F, n, i, j, tuple(-c if F.p == 0 else (-c) % F.p for c in q))
        elif kind < 0.85 and n > 1:
            i, j = rng.sample(range(n), 2)
            perm = list(range(n))
            perm[i], perm[j] = j, i
            E = PolyMatrix._make(F, n, n, tuple((F.one,) if perm[r] == c else () for r in range(n) for c in range(n)))
            Ei = E
        else:
            i = rng.randrange(n)
            c = random_scalar(rng, F, nonzero=True)
            E = _scaling(F, n, i, c)
            Ei = _scaling(F, n, i, F.inv(c))
        P = E @ P
        Pi = Pi @ Ei
    return P, Pi


def _elementary(F, n, i, j, q):
    e = [(F.one,) if r == c else () for r in range(n) for c in range(n)]
    e[i * n + j] = q
    return PolyMatrix._make(F, n, n, tuple(e))


def _scaling(F, n, i, c):
    e = [(F.one,) if r == c2 else () for r in range(n) for c2 in range(n)]
    e[i * n + i] = (c,)
    return PolyMatrix._make(F, n, n, tuple(e))


def random_mf(rng: random.Random, T: RingTower, rank: int, exponents: list[int] | None = None) -> MatrixFactorization:
    """``d = P diag(c_i s^a_i) Q`` and ``h = Q^-1 diag(u c_i^-1 s^(e-a_i)) P^-1``."""
    F = T.field
    a = exponents if exponents is not None else [rng.randint(0, T.e) for _ in range(rank)]
    cs = [random_scalar(rng, F, nonzero=True) for _ in range(rank)]
    P, Pi = random_unimodular(rng, F, rank)
    Q, Qi = random_unimodular(rng, F, rank)
    zeros = lambda k: (F.zero,) * k  # noqa: E731
    D = PolyMatrix.diagonal(F, [zeros(ai) + (c,) for ai, c in zip(a, cs)])
    H = PolyMatrix.diagonal(F, [zeros(T.e - ai) + (F.mul(T.u, F.inv(c)),) for ai, c in zip(a, cs)])
    return MatrixFactorization(T, P @ D @ Q, Qi @ H @ Pi)


def random_one_two_term(rng: random.Random, T: RingTower, rank: int, degree: int = 0) -> OneHomotopyModule:
    E = random_mf(rng, T, rank)
    return OneHomotopyModule.two_term(T, E.d, E.h, degree)


def homotopies_for(T: RingTower, d: PolyMatrix) -> tuple[PolyMatrix, PolyMatrix]:
    """Solve ``d h = pi`` and ``h d = pi`` for ``h``; returns a particular solution and a kernel basis.

    The unknown is ``vec(h)`` (row-major).
    """
    F = T.field
    r1, r0 = d.shape
    I0, I1 = PolyMatrix.identity(F, r0), PolyMatrix.identity(F, r1)
    A = d.kron(I1).vstack(I0.kron(d.T))
    rhs = list(T.pi_id(r1)._e) + list(T.pi_id(r0)._e)
    sol = solve_linear(A, PolyMatrix._make(F, len(rhs), 1, tuple(rhs)))
    if not sol.solvable:
        raise ConventionViolation("d admits no homotopy")
    return sol.x, sol.kernel


def _combine(rng, F, base: PolyMatrix, kernel: PolyMatrix, rows: int, cols: int) -> PolyMatrix:
    v = base
    if kernel.cols:
        c = PolyMatrix._make(F, kernel.cols, 1, tuple(random_poly_raw(rng, F, 1) for _ in range(kernel.cols)))
        v = v + kernel @ c
    return PolyMatrix._make(F, rows, cols, v._e)


def random_two_two_term(rng: random.Random, T: RingTower, rank: int, degree: int = 0) -> TwoHomotopyModule:
    """Pick ``d`` from a random factorization, then draw ``h1`` and ``h2`` independently
    from the full solution set of the defining equations."""
    F = T.field
    d = random_mf(rng, T, rank).d
    x, K = homotopies_for(T, d)
    h1 = _combine(rng, F, x, K, rank, rank)
    h2 = _combine(rng, F, x, K, rank, rank)
    return TwoHomotopyModule.two_term(T, d, h1, h2, degree)


def conjugate(rng: random.Random, M: KoszulModule) -> KoszulModule:
    """Transport ``M`` along a random degreewise unimodular change of basis."""
    F = M.field
    g = {n: random_unimodular(rng, F, M.rank(n)) for n in M.degrees}
    G = lambda n: g[n][0] if n in g else PolyMatrix.identity(F, 0)  # noqa: E731
    Gi = lambda n: g[n][1] if n in g else PolyMatrix.identity(F, 0)  # noqa: E731
    d = [G(n + 1) @ M.dmap(n) @ Gi(n) for n in M.degrees]
    hs = [[G(n - 1) @ M.hmap(k, n) @ Gi(n) for n in M.degrees] for k in range(M.n_homotopies)]
    return type(M)(M.tower, M.min_degree, M.ranks, d, hs)


def random_three_term_two(rng: random.Random, T: RingTower, a: int, b: int, n: int = 0) -> TwoHomotopyModule:
    """A non-split extension of ``B`` (degrees ``n, n+1``) by ``A`` (degrees ``n-1, n``).

    ``h_i^n = [h_A, psi_i]`` and ``h_i^{n+1} = [theta_i; h_B]``, where each pair
    ``(theta_i, psi_i)`` is a random element of the kernel of the linear
    conditions ``d_A psi + theta d_B = 0`` and ``h_A theta + psi h_B = 0``.
    """
    F = T.field
    A = random_two_two_term(rng, T, a, n - 1)
    B = random_two_two_term(rng, T, b, n)
    dA, hA = A.dmap(n - 1), A.hmap(0, n)
    dB, hB = B.dmap(n), B.hmap(0, n + 1)
    Ia, Ib = PolyMatrix.identity(F, a), PolyMatrix.identity(F, b)
    # unknowns: vec(theta) then vec(psi), both a x b
    top = (Ia.kron(dB.T)).hstack(dA.kron(Ib))
    bottom = (hA.kron(Ib)).hstack(Ia.kron(hB.T))
    K = kernel_basis(top.vstack(bottom))
    zero = PolyMatrix.zero(F, 2 * a * b, 1)
    pieces = []
    for _ in range(2):
        v = _combine(rng, F, zero, K, 2 * a * b, 1)
        pieces.append((PolyMatrix._make(F, a, b, v._e[: a * b]), PolyMatrix._make(F, a, b, v._e[a * b:])))
    d0 = dA.vstack(PolyMatrix.zero(F, b, a))
    d1 = PolyMatrix.zero(F, b, a).hstack(dB)
    z = PolyMatrix.zero
    hs = [[z(F, 0, a), hA.hstack(psi), theta.vstack(hB)] for theta, psi in pieces]
    M = TwoHomotopyModule(T, n - 1, [a, a + b, b], [d0, d1, z(F, 0, b)], hs)
    M = conjugate(rng, M)
    if validate(M):
        raise ConventionViolation("three-term generator produced an invalid object")
    return M


def random_short_two(rng: random.Random, T: RingTower, max_rank: int = 2) -> TwoHomotopyModule:
    """A valid two-homotopy module spanning at most three degrees."""
    n = rng.randint(-1, 1)
    kind = rng.random()
    if kind < 0.35:
        return random_two_two_term(rng, T, rng.randint(1, max_rank), n)
    if kind < 0.8:
        return random_three_term_two(rng, T, rng.randint(1, max_rank), rng.randint(1, max_rank), n)
    N = random_one_two_term(rng, T, rng.randint(1, max(1, max_rank - 1)), n)
    return conjugate(rng, pullback_a(rng.choice((1, 2)), N))


def random_capped_two(rng: random.Random, T: RingTower, cap: int = 3) -> TwoHomotopyModule:
    """Like :func:`random_short_two`, but every degree has rank at most ``cap``."""
    n = rng.randint(-1, 1)
    kind = rng.random()
    if cap < 2 or kind < 0.35:
        return random_two_two_term(rng, T, rng.randint(1, cap), n)
    if kind < 0.8:
        a = rng.randint(1, cap - 1)
        return random_three_term_two(rng, T, a, rng.randint(1, cap - a), n)
    N = random_one_two_term(rng, T, rng.randint(1, cap // 2), n)
    return conjugate(rng, pullback_a(rng.choice((1, 2)), N))


def random_short_one(rng: random.Random, T: RingTower, max_rank: int = 2) -> OneHomotopyModule:
    return pushforward_a(rng.choice((1, 2)), random_short_two(rng, T, max_rank))


def random_coords(rng: random.Random, F: FieldSpec, n: int, max_deg: int = 1) -> PolyMatrix:
    return PolyMatrix._make(F, n, 1, tuple(random_poly_raw(rng, F, max_deg) for _ in range(n)))


def random_chain_map(rng: random.Random, E: KoszulModule, F: KoszulModule, boundary: bool | None = None) -> DgMorphism:
    """A random degree 0 cocycle; with ``boundary`` true it is ``D(xi)`` for a random ``xi``."""
    H = HomComplex(E, F)
    K = E.field
    if boundary is None:
        boundary = rng.random() < 0.4
    if boundary:
        xi = H.element(-1, random_coords(rng, K, H.rank(-1)))
        return xi.differential()
    Z = kernel_basis(H.differential(0))
    return H.element(0, Z @ random_coords(rng, K, Z.cols))
