"""Exact engine for strict Koszul dg-modules over k[s] and matrix factorizations of u*s^e."""

from .dg import (
    CohomologyTable,
    DgMorphism,
    HomComplex,
    OneHomotopyModule,
    TwoHomotopyModule,
    cohomology,
    cone,
    direct_sum,
    hom_complex,
    is_boundary_in_h0,
    is_null_homotopic,
    is_quasi_iso,
    shift,
    validate,
)
from .errors import (
    Cancelled,
    ConventionViolation,
    DimMismatch,
    EngineError,
    FieldMismatch,
    InvalidObject,
    NeedsReduction,
    NotARoot,
    NotChainMap,
    NotMfMorphism,
    StructuralViolation,
    TowerMismatch,
)
from .koszul import (
    PeriodicityWitness,
    counit,
    diagonal_pushforward,
    extend_scalars,
    galois_twist,
    periodicity_witness,
    pullback_a,
    pushforward_a,
    split_three_term,
)
from .mf import MatrixFactorization, MfMorphism, fold, is_contractible, mf_cone, mf_hom_classes, mf_shift, unfold, validate_mf
from .ring import GF, QQ, FieldSpec, FgModulePresentation, Poly, PolyMatrix, mat, poly, smith_normal_form
from .sing import SingReport, euler_class, in_relative_kernel, is_perfect, localization_diagnostics
from .tower import RingTower

__version__ = "0.1.0"
