"""Exact higher-order differential operators, derived brackets and L∞ checks over ℚ."""

from .algebra import AlgebraSpec, LieSpec, check_properties, is_derivation, left_mult
from .cohomology import build_cohomology, cdbt_brackets, check_descent
from .derived import (
    DerivedBracketConfig, EndAlgebra, SplitLie, adjoin_derivation, b_bracket, c_bracket,
    semidirect_sum, verify_cross_construction, verify_derived_lie, voronov_family,
)
from .errors import (
    BasisMismatch, HypothesisViolation, InhomogeneousMap, InvalidArgument, MalformedInput,
    MissingUnit, NotFirstOrder, UnsupportedInput,
)
from .gradedcore import (
    GradedBasis, MultilinearMap, Permutation, Vector, compose, graded_commutator, kernel_image,
    koszul_sign, unshuffles,
)
from .higherops import gamma, order_of, phi, psi, unshuffle_sum, verify_equivalence, verify_order_calculus
from .hochschild import HochschildComplex, derived_commutator, suspend_dga
from .jsonio import dump_algebra, load_algebra, loads_algebra
from .report import Report
from .shlie import BracketFamily, check_linfty, symmetrize_ainfty

__version__ = "0.1.0"

__all__ = [
    "AlgebraSpec", "LieSpec", "check_properties", "is_derivation", "left_mult",
    "build_cohomology", "cdbt_brackets", "check_descent",
    "DerivedBracketConfig", "EndAlgebra", "SplitLie", "adjoin_derivation", "b_bracket",
    "c_bracket", "semidirect_sum", "verify_cross_construction", "verify_derived_lie",
    "voronov_family",
    "BasisMismatch", "HypothesisViolation", "InhomogeneousMap", "InvalidArgument",
    "MalformedInput", "MissingUnit", "NotFirstOrder", "UnsupportedInput",
    "GradedBasis", "MultilinearMap", "Permutation", "Vector", "compose", "graded_commutator",
    "kernel_image", "koszul_sign", "unshuffles",
    "gamma", "order_of", "phi", "psi", "unshuffle_sum", "verify_equivalence",
    "verify_order_calculus",
    "HochschildComplex", "derived_commutator", "suspend_dga",
    "dump_algebra", "load_algebra", "loads_algebra",
    "Report",
    "BracketFamily", "check_linfty", "symmetrize_ainfty",
]
