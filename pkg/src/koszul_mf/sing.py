"""Decision procedures at the level of the singularity category.

An object of the one-homotopy category vanishes modulo perfect complexes
exactly when its folded matrix factorization is contractible; everything here
reduces to that test.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .dg import OneHomotopyModule, TwoHomotopyModule, cohomology, cone, validate
from .errors import ConventionViolation, StructuralViolation
from .koszul import counit, periodicity_witness, pullback_a, pushforward_a
from .mf import fold, is_contractible
from .ring import PolyMatrix
from .tower import RingTower


def is_perfect(M: OneHomotopyModule, method: str = "reduced") -> bool:
    return is_contractible(fold(M), method) is not None


def in_relative_kernel(M: TwoHomotopyModule, method: str = "reduced") -> bool:
    """Membership in the kernel of ``a_{1*}``, i.e. ``a_{1*} M`` is perfect."""
    return is_perfect(pushforward_a(1, M), method)


def euler_class(M: OneHomotopyModule) -> int:
    """``sum (-1)^n length H^n(M)``; cohomology must be torsion (it is killed by ``pi``)."""
    total = 0
    for n, H in cohomology(M).items():
        if not H.is_torsion():
            raise StructuralViolation(f"H^{n} has a free part, so the module is not valid")
        total += (-1) ** (n % 2) * H.length
    return total


def free_koszul_module(tower: RingTower, dP: dict[int, PolyMatrix] | None = None, ranks: dict[int, int] | None = None) -> OneHomotopyModule:
    """The perfect object ``P + P[1]`` attached to a complex of free modules ``(P, d_P)``.

    ``d = [[d_P, pi], [0, -d_P]]`` and ``h = [[0, 0], [1, 0]]``; this is the
    Koszul resolution of ``P`` by ``K(O_L, pi)``.
    """
    dP = dict(dP or {})
    rk = dict(ranks or {})
    for n, m in dP.items():
        rk.setdefault(n, m.cols)
        rk.setdefault(n + 1, m.rows)
    # a bare complex with zero homotopy; a_1^* then attaches the Koszul generator
    P = OneHomotopyModule(tower, *_dense(tower, dP, rk))
    two = pullback_a(2, P)
    return pushforward_a(1, two)


def _dense(tower, dP, rk):
    K = tower.field
    nz = [n for n, r in rk.items() if r]
    if not nz:
        return 0, (), (), [()]
    lo, hi = min(nz), max(nz)
    r = lambda n: rk.get(n, 0)  # noqa: E731
    d = [dP.get(n, PolyMatrix.zero(K, r(n + 1), r(n))) for n in range(lo, hi + 1)]
    h = [PolyMatrix.zero(K, r(n - 1), r(n)) for n in range(lo, hi + 1)]
    return lo, [r(n) for n in range(lo, hi + 1)], d, [h]


def object_id(M) -> str:
    from .serialize import dumps

    return hashlib.sha256(dumps(M).encode()).hexdigest()[:12]


@dataclass(frozen=True)
class SingReport:
    object_id: str
    is_perfect: bool
    relative_kernel_member: bool
    euler_class: int
    periodicity_verified: bool | None
    diagnostics: str

    def as_dict(self) -> dict:
        return {
            "object_id": self.object_id,
            "is_perfect": self.is_perfect,
            "relative_kernel_member": self.relative_kernel_member,
            "euler_class": self.euler_class,
            "periodicity_verified": self.periodicity_verified,
            "diagnostics": self.diagnostics,
        }


def localization_diagnostics(M: TwoHomotopyModule) -> SingReport:
    """Check the object-level shadow of the localization sequence on ``M``.

    Computed: whether ``a_{1*} M`` is perfect (kernel membership, decided by
    both contractibility solvers), that
    ``a_{1*} a_2^* a_{2*} M`` is perfect, that ``a_{1*}`` of the counit cone has
    the same perfectness as ``a_{1*} M``, the periodicity witness, and that the
    Euler class is additive along the counit triangle.
    """
    if validate(M):
        raise StructuralViolation("localization diagnostics need a valid object")
    eps = counit(M)
    notes = []
    one = pushforward_a(1, M)
    perfect = is_perfect(one)
    kernel = in_relative_kernel(M, method="direct")
    if kernel != perfect:
        raise ConventionViolation("direct and reduced contractibility solvers disagree")
    if not is_perfect(pushforward_a(1, eps.source)):
        raise ConventionViolation("a_1* a_2^* a_2* M is not perfect")
    notes.append("a1* a2^* a2* M perfect")
    C = cone(eps).cone
    if is_perfect(pushforward_a(1, C)) != perfect:
        raise ConventionViolation("counit cone and M disagree modulo perfect objects")
    notes.append("a1* cone(counit) matches a1* M modulo perfect")
    w = periodicity_witness(M)
    notes.append("periodicity quasi-iso verified")
    chi = euler_class(one)
    chi_src = euler_class(pushforward_a(1, eps.source))
    chi_cone = euler_class(pushforward_a(1, C))
    if chi_cone != chi - chi_src:
        raise ConventionViolation("Euler class is not additive on the counit triangle")
    notes.append(f"euler: cone {chi_cone} = {chi} - {chi_src}")
    return SingReport(object_id(M), perfect, kernel, chi, w.quasi_iso, "; ".join(notes))
