"""Exact arithmetic substrate: fields, polynomials, matrices over k[s], Smith form."""

from .field import GF, QQ, FieldSpec
from .linalg import (
    FgModulePresentation,
    Solution,
    cokernel_presentation,
    column_vector,
    in_column_span,
    kernel_basis,
    kernel_with_retraction,
    solve_linear,
)
from .matrix import PolyMatrix, mat
from .poly import Poly, poly
from .snf import SnfResult, cancel_scope, determinant, invariant_factors, rank, smith_normal_form


def poly_arith(a: Poly, b: Poly, op: str) -> Poly:
    """Dispatch ``add``/``sub``/``mul`` on two polynomials."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown polynomial operation {op!r}")


def mat_mul(A: PolyMatrix, B: PolyMatrix) -> PolyMatrix:
    return A @ B


__all__ = [
    "GF",
    "QQ",
    "FieldSpec",
    "FgModulePresentation",
    "Solution",
    "cokernel_presentation",
    "column_vector",
    "in_column_span",
    "kernel_basis",
    "kernel_with_retraction",
    "solve_linear",
    "PolyMatrix",
    "mat",
    "Poly",
    "poly",
    "SnfResult",
    "cancel_scope",
    "determinant",
    "invariant_factors",
    "rank",
    "smith_normal_form",
    "poly_arith",
    "mat_mul",
]
