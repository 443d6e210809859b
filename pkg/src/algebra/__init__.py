from .poly import (
    DEFAULT_ORDER,
    MonomialOrder,
    Polynomial,
    divide_exact,
    evaluate,
    linear_change,
    multivariate_gcd,
    partial_substitute,
    reduce,
    resultant,
    resultant_with_cofactors,
    total_degree,
)
from .parsing import format_polynomial, parse_polynomial
from .ideal import (
    GradeKind,
    GroebnerBasis,
    buchberger_cofactors,
    grade_two_check,
    ideal_equal,
    is_unit_ideal,
    represent_in_ideal,
)
from .polymat import (
    PolyMatrix,
    determinant,
    inverse_unimodular,
    is_unimodular,
    matrix_degree,
    maximal_minors,
    signed_maximal_minors,
)
