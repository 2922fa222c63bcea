"""Exact supertropical linear algebra.

Scalars live in the extended max-plus semiring with a ghost layer that marks
ambiguous maxima.  The package provides matrices with permanent-based
determinants and adjoints, quasi-inverses, a Cramer-rule solver for
``A x |= v``, characteristic polynomials with their tangible roots and
eigenvectors, and a randomized checker for matrix identities.
"""

from .errors import *  # noqa: F401,F403
from .harness import Profile, builtin_suite, check_identity, parse_expression, random_matrix
from .io import format_matrix, format_vector, parse_matrix, parse_vector
from .matrix import (
    DetResult,
    TropMatrix,
    TropVector,
    adjoint,
    big_quasi_inverse,
    determinant,
    is_quasi_identity,
    mat_add,
    mat_ghost_surpasses,
    mat_mul,
    mat_nu_leq,
    mat_nu_matched,
    quasi_identities,
    quasi_inverse,
    tangible_adjoint,
    tangible_quasi_inverse,
)
from .scalar import ONE, ZERO, Scalar, ghost_surpasses, nu, parse_scalar, format_scalar, scalar
from .solver import cramer_solve, max_solution_check, singular_kernel_column, verify_ghost_solution
from .spectral import TropPolynomial, char_poly, dominant_multicycle, eigen_data, tangible_roots

__version__ = "0.1.0"
