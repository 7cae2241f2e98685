"""Strict Koszul dg-modules over ``k[s]`` and their hom complexes.

An object is a bounded complex of free ``k[s]``-modules ``(E, d)`` together
with one or two degree ``-1`` maps ``h_i`` satisfying

* ``d d = 0`` and ``h_i h_i = 0``,
* ``h_1 h_2 + h_2 h_1 = 0``,
* ``d h_i + h_i d = pi_K * id``.

Matrices act on column vectors: ``d^n`` has shape ``rank(n+1) x rank(n)`` and
``h^n`` has shape ``rank(n-1) x rank(n)``.

Sign conventions (checked by :func:`validate` on every construction):

* ``E[k]^n = E^{n+k}`` with ``d`` and ``h`` multiplied by ``(-1)^k``;
* ``cone(phi: E -> F)^n = F^n + E^{n+1}`` with ``d = [[d_F, phi], [0, -d_E]]``
  and ``h = diag(h_F, -h_E)``;
* a degree ``n`` morphism satisfies ``phi h_E = (-1)^n h_F phi`` and the hom
  differential is ``D(phi) = d_F phi + (-1)^(n+1) phi d_E``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import ClassVar, Iterable, Mapping, Sequence

from .errors import ConventionViolation, DimMismatch, NotChainMap, TowerMismatch
from .ring import FgModulePresentation, PolyMatrix, kernel_with_retraction, smith_normal_form, solve_linear
from .tower import RingTower


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def _signed(m: PolyMatrix, sign: int) -> PolyMatrix:
    return m if sign > 0 else -m


class KoszulModule:
    """Common machinery for :class:`OneHomotopyModule` and :class:`TwoHomotopyModule`.

    Stored data: ``min_degree``, per-degree ``ranks``, the differentials ``d``
    (``d[i]`` leaves degree ``min_degree + i``) and ``hs[k][i]`` for each
    homotopy. Zero ranks at either end are trimmed away; the zero object has
    no degrees at all.
    """

    n_homotopies: ClassVar[int] = 0

    __slots__ = ("tower", "min_degree", "ranks", "d", "hs", "_hash")

    def __init__(self, tower: RingTower, min_degree: int, ranks: Sequence[int], d: Sequence[PolyMatrix], hs: Sequence[Sequence[PolyMatrix]]):
        ranks = tuple(int(r) for r in ranks)
        d, hs = tuple(d), tuple(tuple(h) for h in hs)
        if len(hs) != self.n_homotopies:
            raise TypeError(f"{type(self).__name__} needs {self.n_homotopies} homotopies, got {len(hs)}")
        if len(d) != len(ranks) or any(len(h) != len(ranks) for h in hs):
            raise DimMismatch("one matrix per degree is required")
        lo, hi = 0, len(ranks)
        while lo < hi and ranks[lo] == 0:
            lo += 1
        while hi > lo and ranks[hi - 1] == 0:
            hi -= 1
        F = tower.field
        ranks_t = ranks[lo:hi]
        d = d[lo:hi]
        hs = tuple(h[lo:hi] for h in hs)
        n0 = min_degree + lo if ranks_t else 0
        rk = lambda i: ranks_t[i] if 0 <= i < len(ranks_t) else 0  # noqa: E731
        for i in range(len(ranks_t)):
            if d[i].field != F or d[i].shape != (rk(i + 1), rk(i)):
                raise DimMismatch(f"d^{n0 + i} has shape {d[i].shape}, expected {(rk(i + 1), rk(i))}")
            for k, h in enumerate(hs):
                if h[i].field != F or h[i].shape != (rk(i - 1), rk(i)):
                    raise DimMismatch(f"h{k + 1}^{n0 + i} has shape {h[i].shape}, expected {(rk(i - 1), rk(i))}")
        self.tower = tower
        self.min_degree = n0
        self.ranks = ranks_t
        self.d = d
        self.hs = hs
        self._hash = None

    # -- constructors ---------------------------------------------------------

    @classmethod
    def from_maps(cls, tower: RingTower, d: Mapping[int, PolyMatrix], hs: Sequence[Mapping[int, PolyMatrix]], ranks: Mapping[int, int] | None = None):
        """Build from ``{degree: matrix}`` maps; ranks are read off the shapes when omitted."""
        rk: dict[int, int] = dict(ranks or {})

        def note(n, r):
            if r:
                if rk.setdefault(n, r) != r:
                    raise DimMismatch(f"inconsistent rank in degree {n}")

        for n, m in d.items():
            note(n, m.cols)
            note(n + 1, m.rows)
        for h in hs:
            for n, m in h.items():
                note(n, m.cols)
                note(n - 1, m.rows)
        nz = [n for n, r in rk.items() if r]
        if not nz:
            return cls.zero(tower)
        lo, hi = min(nz), max(nz)
        r = lambda n: rk.get(n, 0)  # noqa: E731
        F = tower.field
        dd = [d.get(n, PolyMatrix.zero(F, r(n + 1), r(n))) for n in range(lo, hi + 1)]
        hh = [[h.get(n, PolyMatrix.zero(F, r(n - 1), r(n))) for n in range(lo, hi + 1)] for h in hs]
        return cls(tower, lo, [r(n) for n in range(lo, hi + 1)], dd, hh)

    @classmethod
    def zero(cls, tower: RingTower):
        return cls(tower, 0, (), (), [()] * cls.n_homotopies)

    # -- access ---------------------------------------------------------------

    @property
    def field(self):
        return self.tower.field

    @property
    def max_degree(self) -> int:
        return self.min_degree + len(self.ranks) - 1

    @property
    def degrees(self) -> range:
        return range(self.min_degree, self.min_degree + len(self.ranks))

    @property
    def span(self) -> int:
        """Number of degrees between the first and last nonzero term, inclusive."""
        return len(self.ranks)

    def is_zero(self) -> bool:
        return not self.ranks

    def rank(self, n: int) -> int:
        i = n - self.min_degree
        return self.ranks[i] if 0 <= i < len(self.ranks) else 0

    @property
    def total_rank(self) -> int:
        return sum(self.ranks)

    def dmap(self, n: int) -> PolyMatrix:
        """``d^n : E^n -> E^{n+1}``."""
        i = n - self.min_degree
        if 0 <= i < len(self.ranks):
            return self.d[i]
        return PolyMatrix.zero(self.field, self.rank(n + 1), self.rank(n))

    def hmap(self, k: int, n: int) -> PolyMatrix:
        """``h_{k+1}^n : E^n -> E^{n-1}`` (``k`` counts from zero)."""
        i = n - self.min_degree
        if 0 <= i < len(self.ranks):
            return self.hs[k][i]
        return PolyMatrix.zero(self.field, self.rank(n - 1), self.rank(n))

    def identity(self) -> "DgMorphism":
        return DgMorphism.identity(self)

    def replace(self, d: Sequence[PolyMatrix] | None = None, hs=None, tower: RingTower | None = None):
        return type(self)(tower or self.tower, self.min_degree, self.ranks, self.d if d is None else d, self.hs if hs is None else hs)

    def map_matrices(self, fn, tower: RingTower | None = None):
        """Apply ``fn`` to every structure matrix (used by twists and base change)."""
        return type(self)(tower or self.tower, self.min_degree, self.ranks, [fn(m) for m in self.d], [[fn(m) for m in h] for h in self.hs])

    # -- equality -------------------------------------------------------------

    def _key(self):
        return (type(self), self.tower, self.min_degree, self.ranks, self.d, self.hs)

    def __eq__(self, other):
        if not isinstance(other, KoszulModule):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self):
        if self.is_zero():
            return f"{type(self).__name__}(0)"
        return f"{type(self).__name__}(degrees {self.min_degree}..{self.max_degree}, ranks {list(self.ranks)})"


class OneHomotopyModule(KoszulModule):
    """An object ``(E, d, h)`` of the one-homotopy category."""

    n_homotopies = 1
    __slots__ = ()

    @property
    def h(self) -> tuple[PolyMatrix, ...]:
        return self.hs[0]

    def h_at(self, n: int) -> PolyMatrix:
        return self.hmap(0, n)

    @classmethod
    def build(cls, tower: RingTower, d: Mapping[int, PolyMatrix], h: Mapping[int, PolyMatrix], ranks=None):
        return cls.from_maps(tower, d, [h], ranks)

    @classmethod
    def two_term(cls, tower: RingTower, d: PolyMatrix, h: PolyMatrix, degree: int = 0):
        """``E^deg --d--> E^{deg+1}`` with ``h : E^{deg+1} -> E^deg``."""
        return cls.from_maps(tower, {degree: d}, [{degree + 1: h}], {degree: d.cols, degree + 1: d.rows})


class TwoHomotopyModule(KoszulModule):
    """An object ``(E, d, {h1, h2})`` of the two-homotopy category."""

    n_homotopies = 2
    __slots__ = ()

    @property
    def h1(self) -> tuple[PolyMatrix, ...]:
        return self.hs[0]

    @property
    def h2(self) -> tuple[PolyMatrix, ...]:
        return self.hs[1]

    @classmethod
    def build(cls, tower: RingTower, d: Mapping[int, PolyMatrix], h1: Mapping[int, PolyMatrix], h2: Mapping[int, PolyMatrix], ranks=None):
        return cls.from_maps(tower, d, [h1, h2], ranks)

    @classmethod
    def two_term(cls, tower: RingTower, d: PolyMatrix, h1: PolyMatrix, h2: PolyMatrix | None = None, degree: int = 0):
        h2 = h1 if h2 is None else h2
        return cls.from_maps(tower, {degree: d}, [{degree + 1: h1}, {degree + 1: h2}], {degree: d.cols, degree + 1: d.rows})


# -- validation ----------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    """One failed identity: its name, the degree where it fails, and the residual matrix."""

    identity: str
    degree: int
    residual: PolyMatrix

    def __str__(self):
        return f"degree {self.degree}: {self.identity} fails (residual {self.residual.rows}x{self.residual.cols})"


def validate(M: KoszulModule) -> list[Violation]:
    """List every violated structure identity; an empty list means ``M`` is valid."""
    out: list[Violation] = []
    pi = M.tower.pi
    names = ["h"] if M.n_homotopies == 1 else ["h1", "h2"]
    for n in M.degrees:
        r = M.dmap(n + 1) @ M.dmap(n)
        if not r.is_zero():
            out.append(Violation("d∘d = 0", n, r))
        for k, name in enumerate(names):
            r = M.hmap(k, n - 1) @ M.hmap(k, n)
            if not r.is_zero():
                out.append(Violation(f"{name}∘{name} = 0", n, r))
        if M.n_homotopies == 2:
            r = M.hmap(0, n - 1) @ M.hmap(1, n) + M.hmap(1, n - 1) @ M.hmap(0, n)
            if not r.is_zero():
                out.append(Violation("h1∘h2 + h2∘h1 = 0", n, r))
        target = PolyMatrix.scalar(M.field, M.rank(n), pi)
        for k, name in enumerate(names):
            r = M.dmap(n - 1) @ M.hmap(k, n) + M.hmap(k, n + 1) @ M.dmap(n) - target
            if not r.is_zero():
                out.append(Violation(f"d∘{name} + {name}∘d = pi_K·id", n, r))
    return out


def is_valid(M: KoszulModule) -> bool:
    return not validate(M)


# -- morphisms -------------------------------------------------------------------


class DgMorphism:
    """A degree ``n`` element ``{phi^j : E^j -> F^{j+n}}`` of the hom complex.

    Components outside the source's degree range are zero and not stored.
    """

    __slots__ = ("source", "target", "degree", "components")

    def __init__(self, source: KoszulModule, target: KoszulModule, degree: int, components: Mapping[int, PolyMatrix] | None = None):
        if source.tower != target.tower:
            raise TowerMismatch(f"{source.tower} vs {target.tower}")
        if type(source) is not type(target):
            raise TypeError(f"morphism between {type(source).__name__} and {type(target).__name__}")
        components = dict(components or {})
        F = source.field
        comps = []
        for j in source.degrees:
            shape = (target.rank(j + degree), source.rank(j))
            m = components.pop(j, None)
            if m is None:
                m = PolyMatrix.zero(F, *shape)
            elif m.shape != shape:
                raise DimMismatch(f"component {j} has shape {m.shape}, expected {shape}")
            comps.append(m)
        for j, m in components.items():
            if not m.is_zero() or m.shape != (target.rank(j + degree), 0):
                if m.rows and m.cols:
                    raise DimMismatch(f"component {j} lies outside the source degrees")
        self.source = source
        self.target = target
        self.degree = degree
        self.components = tuple(comps)

    @classmethod
    def identity(cls, M: KoszulModule) -> "DgMorphism":
        return cls(M, M, 0, {n: PolyMatrix.identity(M.field, M.rank(n)) for n in M.degrees})

    @classmethod
    def zero(cls, source: KoszulModule, target: KoszulModule, degree: int = 0) -> "DgMorphism":
        return cls(source, target, degree)

    def component(self, j: int) -> PolyMatrix:
        i = j - self.source.min_degree
        if 0 <= i < len(self.components):
            return self.components[i]
        return PolyMatrix.zero(self.source.field, self.target.rank(j + self.degree), self.source.rank(j))

    def as_dict(self) -> dict[int, PolyMatrix]:
        return {j: self.component(j) for j in self.source.degrees}

    def _like(self, other: "DgMorphism"):
        if (self.source, self.target, self.degree) != (other.source, other.target, other.degree):
            raise DimMismatch("morphisms live in different hom spaces")

    def __add__(self, other: "DgMorphism") -> "DgMorphism":
        self._like(other)
        return DgMorphism(self.source, self.target, self.degree, {j: self.component(j) + other.component(j) for j in self.source.degrees})

    def __sub__(self, other: "DgMorphism") -> "DgMorphism":
        self._like(other)
        return DgMorphism(self.source, self.target, self.degree, {j: self.component(j) - other.component(j) for j in self.source.degrees})

    def __neg__(self) -> "DgMorphism":
        return DgMorphism(self.source, self.target, self.degree, {j: -m for j, m in self.as_dict().items()})

    def scale(self, c) -> "DgMorphism":
        return DgMorphism(self.source, self.target, self.degree, {j: m.scale(c) for j, m in self.as_dict().items()})

    def __matmul__(self, other: "DgMorphism") -> "DgMorphism":
        """Composition ``self ∘ other``."""
        if other.target != self.source:
            raise DimMismatch("composition of non-composable morphisms")
        n = other.degree
        return DgMorphism(other.source, self.target, n + self.degree, {j: self.component(j + n) @ other.component(j) for j in other.source.degrees})

    def differential(self) -> "DgMorphism":
        """``D(phi)^j = d_F^{j+n} phi^j + (-1)^(n+1) phi^{j+1} d_E^j``."""
        E, F, n = self.source, self.target, self.degree
        eps = _sign(n + 1)
        comps = {}
        for j in E.degrees:
            comps[j] = F.dmap(j + n) @ self.component(j) + _signed(self.component(j + 1) @ E.dmap(j), eps)
        return DgMorphism(E, F, n + 1, comps)

    def equivariance_residuals(self) -> list[Violation]:
        """Failures of ``phi^j h_E^{j+1} = (-1)^n h_F^{j+n+1} phi^{j+1}``."""
        E, F, n = self.source, self.target, self.degree
        sigma = _sign(n)
        out = []
        lo = E.min_degree - 1
        for k in range(E.n_homotopies):
            for j in range(lo, E.max_degree + 1):
                r = self.component(j) @ E.hmap(k, j + 1) - _signed(F.hmap(k, j + n + 1) @ self.component(j + 1), sigma)
                if not r.is_zero():
                    out.append(Violation(f"phi∘h{k + 1} = (-1)^n h{k + 1}∘phi", j, r))
        return out

    def is_equivariant(self) -> bool:
        return not self.equivariance_residuals()

    def is_cocycle(self) -> bool:
        return all(m.is_zero() for m in self.differential().components)

    def is_chain_map(self) -> bool:
        """Degree zero, strictly equivariant, and commuting with ``d``."""
        return self.degree == 0 and self.is_equivariant() and self.is_cocycle()

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.components)

    def __eq__(self, other):
        if not isinstance(other, DgMorphism):
            return NotImplemented
        return (self.source, self.target, self.degree, self.components) == (other.source, other.target, other.degree, other.components)

    def __hash__(self):
        return hash((self.source, self.target, self.degree, self.components))

    def __repr__(self):
        return f"DgMorphism(degree {self.degree}, {self.source!r} -> {self.target!r})"


def require_chain_map(phi: DgMorphism):
    if phi.degree != 0:
        raise NotChainMap(f"expected a degree 0 map, got degree {phi.degree}")
    if not phi.is_equivariant():
        raise NotChainMap("map does not commute with the homotopies")
    if not phi.is_cocycle():
        raise NotChainMap("map does not commute with the differentials")


# -- cohomology ------------------------------------------------------------------


class CohomologyTable(Mapping[int, FgModulePresentation]):
    """Per-degree cohomology; degrees that are absent are zero."""

    def __init__(self, groups: Mapping[int, FgModulePresentation]):
        self._g = {n: g for n, g in sorted(groups.items()) if not g.is_zero()}

    def __getitem__(self, n: int) -> FgModulePresentation:
        return self._g.get(n, FgModulePresentation())

    def __iter__(self):
        return iter(self._g)

    def __len__(self):
        return len(self._g)

    def __contains__(self, n):
        return n in self._g

    def is_zero(self) -> bool:
        return not self._g

    def shifted(self, k: int) -> "CohomologyTable":
        return CohomologyTable({n - k: g for n, g in self._g.items()})

    def __eq__(self, other):
        if isinstance(other, CohomologyTable):
            return self._g == other._g
        return NotImplemented

    def __str__(self):
        if not self._g:
            return "acyclic"
        return "\n".join(f"H^{n} = {g}" for n, g in self._g.items())


def complex_cohomology(dims: Mapping[int, int], diffs: Mapping[int, PolyMatrix]) -> CohomologyTable:
    """Cohomology of a bounded complex of free modules.

    ``H^n`` is free of rank ``dim_n - rank d^n - rank d^{n-1}`` plus the
    torsion of ``coker d^{n-1}`` (which always lies inside ``ker d^n``).
    """
    ranks: dict[int, int] = {}
    invs: dict[int, list] = {}
    for n, m in diffs.items():
        if m.rows and m.cols and not m.is_zero():
            snf = smith_normal_form(m, transforms=False)
            ranks[n] = snf.rank
            invs[n] = [f for f in snf.invariant_factors if not f.is_unit()]
    out = {}
    for n, dim in dims.items():
        if not dim:
            continue
        free = dim - ranks.get(n, 0) - ranks.get(n - 1, 0)
        out[n] = FgModulePresentation.from_diagonal(free + len(invs.get(n - 1, ())), invs.get(n - 1, ()))
    return CohomologyTable(out)


def cohomology(M: KoszulModule) -> CohomologyTable:
    """Cohomology of the underlying complex ``(E, d)``; the homotopies are ignored."""
    return complex_cohomology({n: M.rank(n) for n in M.degrees}, {n: M.dmap(n) for n in M.degrees})


# -- shift, sum, cone ------------------------------------------------------------------


def shift(M: KoszulModule, k: int = 1) -> KoszulModule:
    """``M[k]``: degree ``n`` holds ``M^{n+k}``; ``d`` and ``h`` pick up ``(-1)^k``."""
    sg = _sign(k)
    if M.is_zero():
        return M
    return type(M)(M.tower, M.min_degree - k, M.ranks, [_signed(m, sg) for m in M.d], [[_signed(m, sg) for m in h] for h in M.hs])


def shift_morphism(phi: DgMorphism, k: int = 1) -> DgMorphism:
    """``phi[k]`` between the shifted objects (components reindexed, sign ``(-1)^(k*n)``)."""
    sg = _sign(k * phi.degree)
    return DgMorphism(shift(phi.source, k), shift(phi.target, k), phi.degree, {j - k: _signed(m, sg) for j, m in phi.as_dict().items()})


def _check_compatible(M: KoszulModule, N: KoszulModule):
    if M.tower != N.tower:
        raise TowerMismatch(f"{M.tower} vs {N.tower}")
    if type(M) is not type(N):
        raise TypeError(f"{type(M).__name__} vs {type(N).__name__}")


def _degree_union(*mods: KoszulModule) -> range:
    nz = [m for m in mods if not m.is_zero()]
    if not nz:
        return range(0)
    return range(min(m.min_degree for m in nz), max(m.max_degree for m in nz) + 1)


def direct_sum(M: KoszulModule, N: KoszulModule) -> KoszulModule:
    _check_compatible(M, N)
    F = M.field
    degs = _degree_union(M, N)
    if not degs:
        return M
    d = [_blockdiag(F, M.dmap(n), N.dmap(n)) for n in degs]
    hs = [[_blockdiag(F, M.hmap(k, n), N.hmap(k, n)) for n in degs] for k in range(M.n_homotopies)]
    return type(M)(M.tower, degs.start, [M.rank(n) + N.rank(n) for n in degs], d, hs)


def _blockdiag(F, A: PolyMatrix, B: PolyMatrix) -> PolyMatrix:
    return PolyMatrix.block(F, [[A, None], [None, B]], [A.rows, B.rows], [A.cols, B.cols])


@dataclass(frozen=True)
class Cone:
    """``cone(phi)`` with its triangle maps ``F -> cone -> E[1]``."""

    cone: KoszulModule
    inclusion: DgMorphism
    projection: DgMorphism


def cone(phi: DgMorphism) -> Cone:
    require_chain_map(phi)
    E, F = phi.source, phi.target
    K = E.field
    degs = _degree_union(F, shift(E, 1))
    d, hs = [], [[] for _ in range(E.n_homotopies)]
    for n in degs:
        rows = [F.rank(n + 1), E.rank(n + 2)]
        cols = [F.rank(n), E.rank(n + 1)]
        d.append(PolyMatrix.block(K, [[F.dmap(n), phi.component(n + 1)], [None, -E.dmap(n + 1)]], rows, cols))
        for k in range(E.n_homotopies):
            hrows = [F.rank(n - 1), E.rank(n)]
            hs[k].append(PolyMatrix.block(K, [[F.hmap(k, n), None], [None, -E.hmap(k, n + 1)]], hrows, cols))
    C = type(E)(E.tower, degs.start if degs else 0, [F.rank(n) + E.rank(n + 1) for n in degs], d, hs)
    inc = DgMorphism(F, C, 0, {n: PolyMatrix.block(K, [[PolyMatrix.identity(K, F.rank(n))], [None]], [F.rank(n), E.rank(n + 1)], [F.rank(n)]) for n in F.degrees})
    E1 = shift(E, 1)
    proj = DgMorphism(C, E1, 0, {n: PolyMatrix.block(K, [[None, PolyMatrix.identity(K, E.rank(n + 1))]], [E.rank(n + 1)], [F.rank(n), E.rank(n + 1)]) for n in C.degrees})
    return Cone(C, inc, proj)


def is_quasi_iso(phi: DgMorphism) -> bool:
    """True iff ``cone(phi)`` is acyclic."""
    return cohomology(cone(phi).cone).is_zero()


# -- hom complexes ---------------------------------------------------------------------


def _assemble(F, row_sizes: Sequence[int], col_sizes: Sequence[int], blocks: Mapping[tuple[int, int], PolyMatrix]) -> PolyMatrix:
    grid = [[blocks.get((i, j)) for j in range(len(col_sizes))] for i in range(len(row_sizes))]
    if not row_sizes or not col_sizes:
        return PolyMatrix.zero(F, sum(row_sizes), sum(col_sizes))
    return PolyMatrix.block(F, grid, list(row_sizes), list(col_sizes))


class HomComplex:
    """The complex ``Hom^*(E, F)`` with each term given by a free basis.

    ``basis(n)`` has one column per basis element, written in the ambient
    coordinates of ``prod_j Hom(E^j, F^{j+n})`` (blocks ordered by ``j``,
    entries row-major). ``differential(n)`` is the map ``Hom^n -> Hom^{n+1}``
    in these bases. Terms are computed on demand and cached.
    """

    def __init__(self, E: KoszulModule, F: KoszulModule):
        _check_compatible(E, F)
        self.source, self.target = E, F
        self.field = E.field
        if E.is_zero() or F.is_zero():
            self.degrees = range(0)
        else:
            self.degrees = range(F.min_degree - E.max_degree, F.max_degree - E.min_degree + 1)
        self._bases: dict[int, tuple[PolyMatrix, PolyMatrix]] = {}
        self._diffs: dict[int, PolyMatrix] = {}

    # ambient layout
    def _layout(self, n: int) -> list[tuple[int, int, int]]:
        E, F = self.source, self.target
        return [(j, F.rank(j + n), E.rank(j)) for j in E.degrees if F.rank(j + n) and E.rank(j)]

    def ambient_dim(self, n: int) -> int:
        return sum(r * c for _, r, c in self._layout(n))

    def to_vector(self, phi: DgMorphism) -> PolyMatrix:
        """Ambient coordinates of ``phi`` as a column vector."""
        entries = []
        for j, r, c in self._layout(phi.degree):
            entries.extend(phi.component(j)._e)
        return PolyMatrix._make(self.field, len(entries), 1, tuple(entries))

    def from_vector(self, n: int, v: PolyMatrix) -> DgMorphism:
        comps, pos = {}, 0
        for j, r, c in self._layout(n):
            comps[j] = PolyMatrix._make(self.field, r, c, tuple(v.raw(pos + t, 0) for t in range(r * c)))
            pos += r * c
        return DgMorphism(self.source, self.target, n, comps)

    def constraint_matrix(self, n: int) -> PolyMatrix:
        """Linear equations cutting ``Hom^n`` out of the ambient space (equivariance)."""
        E, F, K = self.source, self.target, self.field
        lay = self._layout(n)
        index = {j: i for i, (j, _, _) in enumerate(lay)}
        col_sizes = [r * c for _, r, c in lay]
        sigma = _sign(n)
        row_sizes, blocks = [], {}
        for k in range(E.n_homotopies):
            for j in range(E.min_degree - 1, E.max_degree + 1):
                rows_F, cols_E = F.rank(j + n), E.rank(j + 1)
                if not rows_F or not cols_E:
                    continue
                bi = len(row_sizes)
                row_sizes.append(rows_F * cols_E)
                if j in index:
                    # phi^j h_E^{j+1}: right multiplication
                    blocks[(bi, index[j])] = PolyMatrix.identity(K, rows_F).kron(E.hmap(k, j + 1).T)
                if j + 1 in index:
                    left = F.hmap(k, j + n + 1).kron(PolyMatrix.identity(K, cols_E))
                    blocks[(bi, index[j + 1])] = _signed(left, -sigma)
        return _assemble(K, row_sizes, col_sizes, blocks)

    def ambient_differential(self, n: int) -> PolyMatrix:
        E, F, K = self.source, self.target, self.field
        src, dst = self._layout(n), self._layout(n + 1)
        si = {j: i for i, (j, _, _) in enumerate(src)}
        eps = _sign(n + 1)
        blocks = {}
        for bi, (j, r, c) in enumerate(dst):
            if j in si:
                blocks[(bi, si[j])] = F.dmap(j + n).kron(PolyMatrix.identity(K, c))
            if j + 1 in si:
                right = PolyMatrix.identity(K, r).kron(E.dmap(j).T)
                blocks[(bi, si[j + 1])] = _signed(right, eps)
        return _assemble(K, [r * c for _, r, c in dst], [r * c for _, r, c in src], blocks)

    def basis(self, n: int) -> PolyMatrix:
        return self._basis(n)[0]

    def retraction(self, n: int) -> PolyMatrix:
        return self._basis(n)[1]

    def _basis(self, n: int):
        if n not in self._bases:
            dim = self.ambient_dim(n)
            C = self.constraint_matrix(n)
            if C.rows == 0 or C.is_zero():
                I = PolyMatrix.identity(self.field, dim)
                self._bases[n] = (I, I)
            else:
                self._bases[n] = kernel_with_retraction(C)
        return self._bases[n]

    def rank(self, n: int) -> int:
        return self.basis(n).cols

    def differential(self, n: int) -> PolyMatrix:
        """``Hom^n -> Hom^{n+1}`` in the chosen bases."""
        if n not in self._diffs:
            B = self.basis(n)
            image = self.ambient_differential(n) @ B
            R = self.retraction(n + 1)
            M = R @ image
            if self.basis(n + 1) @ M != image:
                raise ConventionViolation(f"D(Hom^{n}) is not contained in Hom^{n + 1}")
            self._diffs[n] = M
        return self._diffs[n]

    def element(self, n: int, coords: PolyMatrix) -> DgMorphism:
        return self.from_vector(n, self.basis(n) @ coords)

    def coordinates(self, phi: DgMorphism) -> PolyMatrix:
        """Coordinates of ``phi`` in ``basis(phi.degree)``; raises if ``phi`` is not in ``Hom^n``."""
        v = self.to_vector(phi)
        c = self.retraction(phi.degree) @ v
        if self.basis(phi.degree) @ c != v:
            raise ValueError("morphism is not equivariant, so it is not in the hom complex")
        return c

    def cohomology(self, degrees: Iterable[int] | None = None) -> CohomologyTable:
        degrees = list(self.degrees if degrees is None else degrees)
        dims = {n: self.rank(n) for n in degrees}
        diffs = {}
        for n in degrees:
            diffs[n - 1] = self.differential(n - 1)
            diffs[n] = self.differential(n)
        return complex_cohomology(dims, diffs)

    def h0(self) -> FgModulePresentation:
        return self.cohomology([0])[0]


def hom_complex(E: KoszulModule, F: KoszulModule) -> HomComplex:
    return HomComplex(E, F)


def is_null_homotopic(phi: DgMorphism) -> DgMorphism | None:
    """A homotopy ``xi`` of degree ``-1`` with ``d_F xi + xi d_E = phi``, or ``None``.

    Decided exactly by solving the hom-complex differential over ``k[s]``.
    """
    require_chain_map(phi)
    H = HomComplex(phi.source, phi.target)
    if H.ambient_dim(0) == 0:
        return DgMorphism.zero(phi.source, phi.target, -1)
    B = H.basis(-1)
    A = H.ambient_differential(-1) @ B
    sol = solve_linear(A, H.to_vector(phi))
    if not sol.solvable:
        return None
    xi = H.from_vector(-1, B @ sol.x)
    if xi.differential() != phi or not xi.is_equivariant():
        raise ConventionViolation("homotopy witness fails verification")
    return xi


def is_boundary_in_h0(phi: DgMorphism) -> bool:
    """Decide whether the class of ``phi`` in ``H^0 Hom`` vanishes.

    Independent of :func:`is_null_homotopic`: compares the invariant factors of
    ``Hom^0 / B^0`` with those of ``Hom^0 / (B^0 + <phi>)``; they agree iff
    ``phi`` already lies in ``B^0``.
    """
    from .ring import cokernel_presentation

    H = HomComplex(phi.source, phi.target)
    if H.ambient_dim(0) == 0:
        return True
    c = H.coordinates(phi)
    M = H.differential(-1)
    return cokernel_presentation(M) == cokernel_presentation(M.hstack(c))
