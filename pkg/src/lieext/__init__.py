"""Exact central-extension computations for integer-graded Lie algebras.

The package computes 2-cocycles modulo 2-coboundaries (the second Lie
algebra cohomology with trivial coefficients, equivalently central
extensions) for algebras whose basis families are indexed by the integers
and whose brackets have polynomial structure constants, entirely in exact
rational arithmetic.  The bundled svir preset is a two-parameter family of
deformed Schroedinger-Virasoro algebras whose degree-zero H^2 dimensions
follow a closed-form case table that the engine reproduces numerically.
"""

from fractions import Fraction

from .algebra import (
    AlgebraSpec,
    BasisElement,
    BracketRule,
    ParameterError,
    check_jacobi_symbolic,
    check_jacobi_window,
    integrality_flags,
    validate_parameters,
)
from .dsl import Diagnostic, ParseResult, parse, parse_polynomial, render
from .engine import (
    REGISTRY,
    CocycleAssignment,
    H2Report,
    CocycleLine,
    KnownCocycle,
    MatchResult,
    PairBasis,
    VerifyReport,
    Window,
    assemble_constraints,
    coboundary_assignment,
    coboundary_space,
    cocycle_space,
    constraint_row,
    degree_reduce,
    enumerate_pairs,
    h2,
    is_coboundary,
    match_known,
    nonzero_degree_triviality,
    theorem_predicted_dim,
    verify_cocycle,
)
from .poly import IndexPolynomial
from .presets import BoundAlgebra, load_algebra, preset
from .rational import Rational, format_rational, is_integer, parse_rational, rational
from .sparse import (
    SparseMatrix,
    VectorBasis,
    in_span,
    nullspace,
    project_dimension,
    rank,
    span_basis,
)

__version__ = "0.1.0"

__all__ = [
    "AlgebraSpec",
    "BasisElement",
    "BoundAlgebra",
    "BracketRule",
    "CocycleAssignment",
    "Diagnostic",
    "Fraction",
    "H2Report",
    "IndexPolynomial",
    "CocycleLine",
    "KnownCocycle",
    "MatchResult",
    "PairBasis",
    "ParameterError",
    "ParseResult",
    "REGISTRY",
    "Rational",
    "SparseMatrix",
    "VectorBasis",
    "VerifyReport",
    "Window",
    "assemble_constraints",
    "check_jacobi_symbolic",
    "check_jacobi_window",
    "coboundary_assignment",
    "coboundary_space",
    "cocycle_space",
    "constraint_row",
    "degree_reduce",
    "enumerate_pairs",
    "format_rational",
    "h2",
    "in_span",
    "integrality_flags",
    "is_coboundary",
    "is_integer",
    "load_algebra",
    "match_known",
    "nonzero_degree_triviality",
    "nullspace",
    "parse",
    "parse_polynomial",
    "parse_rational",
    "preset",
    "project_dimension",
    "rank",
    "rational",
    "render",
    "span_basis",
    "theorem_predicted_dim",
    "verify_cocycle",
]
