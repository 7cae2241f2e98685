"""The base data ``k[t] -> k[s]``, ``t -> u * s**e``."""

from __future__ import annotations

from dataclasses import dataclass, field

from .ring import FieldSpec, Poly, PolyMatrix


@dataclass(frozen=True)
class RingTower:
    """Totally ramified tower of degree ``e`` with ``pi_K = u * s**e``.

    ``chain`` records the ramification degrees of the successive extensions a
    tower was built from (see :func:`koszul_mf.koszul.extend_scalars`); it is
    bookkeeping only and does not take part in equality.
    """

    field: FieldSpec
    e: int
    u: object
    chain: tuple[int, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.e < 1:
            raise ValueError(f"ramification degree must be >= 1, got {self.e}")
        u = self.field(self.u)
        if not u:
            raise ValueError("u must be a nonzero field element")
        object.__setattr__(self, "u", u)
        if not self.chain:
            object.__setattr__(self, "chain", (self.e,))

    @property
    def pi(self) -> Poly:
        """The image of the base uniformizer, ``u * s**e``."""
        return Poly.monomial(self.field, self.e, self.u)

    @property
    def s(self) -> Poly:
        return Poly.monomial(self.field, 1)

    def poly(self, *coeffs) -> Poly:
        return Poly(self.field, coeffs)

    def pi_id(self, n: int) -> PolyMatrix:
        return PolyMatrix.scalar(self.field, n, self.pi)

    def __str__(self):
        return f"{self.field}[s], pi_K = {self.pi}"
