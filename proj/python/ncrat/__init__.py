"""Non-commutative rational expressions over complex matrices.

Parse expressions in x1, x2', ... with nested inverses, evaluate them on
matrix tuples with domain checking, build and verify u A^-1 v realizations,
test rational identities on random matrices, and run strong-convergence
experiments against free-probability limits.
"""

from ._ncrat import (
    DEFAULT_SEED,
    DEFAULT_TOL,
    DomainError,
    Expression,
    ParseError,
    Realization,
    SingularMatrixError,
    eventual_domain_curve,
    evaluate,
    fixture_catalog,
    in_domain,
    inverse_norm_via_gap,
    invert,
    normalized_trace,
    operator_norm,
    parse,
    realization_fixtures,
    realize,
    run_convergence,
    run_outlier_experiment,
    sample,
    schur_block_inverse,
    smallest_spectral_point_psd,
    stieltjes_semicircle,
    test_identity,
    zero_test,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_SEED",
    "DEFAULT_TOL",
    "DomainError",
    "Expression",
    "ParseError",
    "Realization",
    "SingularMatrixError",
    "eventual_domain_curve",
    "evaluate",
    "fixture_catalog",
    "in_domain",
    "inverse_norm_via_gap",
    "invert",
    "normalized_trace",
    "operator_norm",
    "parse",
    "realization_fixtures",
    "realize",
    "run_convergence",
    "run_outlier_experiment",
    "sample",
    "schur_block_inverse",
    "smallest_spectral_point_psd",
    "stieltjes_semicircle",
    "test_identity",
    "zero_test",
]
