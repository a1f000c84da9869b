"""Exact algebra for degree d-linear maps, fern trees and their Jacobian ideal.

The package builds formal inverses of maps x - (Ax)^d as sums over labeled
plane trees, forms the ideal cut out by the Jacobian condition, checks the
membership identity expressing fern z-values through Cayley-Hamilton, decides
Groebner-basis membership questions, and certifies a combinatorial proof of
Cayley-Hamilton by exhaustive enumeration.
"""

from .polyring import (
    DEGREVLEX, LEX, MonomialOrder, Polynomial, PolynomialSyntaxError, VarSpec,
    format_polynomial, parse_polynomial,
)
from .polymatrix import PolyMatrix, char_coeffs_reversed, char_poly, determinant, principal_minor
from .trees import (
    FernLabeling, PlaneTree, build_fern, class_sum_and_factor, enumerate_d_regular_trees,
    fern_mu, formal_inverse_fixed_point, formal_inverse_tree_sum, fuss_catalan,
    parse_fern_labeling, z_fern, z_value,
)
from .jacobian import (
    build_B, build_map, char_ideal, jacobian_ideal, nil2_ideal, theorem_membership_check,
)
from .groebner import (
    BasisCache, GroebnerBasis, GroebnerTimeout, Limits, buchberger, ideal_membership,
    normal_form, radical_membership,
)
from .chproof import involution, verify_ch

__version__ = "0.1.0"

__all__ = [
    "DEGREVLEX", "LEX", "MonomialOrder", "Polynomial", "PolynomialSyntaxError", "VarSpec",
    "format_polynomial", "parse_polynomial",
    "PolyMatrix", "char_coeffs_reversed", "char_poly", "determinant", "principal_minor",
    "FernLabeling", "PlaneTree", "build_fern", "class_sum_and_factor", "enumerate_d_regular_trees",
    "fern_mu", "formal_inverse_fixed_point", "formal_inverse_tree_sum", "fuss_catalan",
    "parse_fern_labeling", "z_fern", "z_value",
    "build_B", "build_map", "char_ideal", "jacobian_ideal", "nil2_ideal", "theorem_membership_check",
    "BasisCache", "GroebnerBasis", "GroebnerTimeout", "Limits", "buchberger", "ideal_membership",
    "normal_form", "radical_membership",
    "involution", "verify_ch",
]
