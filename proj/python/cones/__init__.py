"""Finite-measure cones, coherence spaces, and a small probabilistic
language, backed by the C++ core."""

from ._cones import (  # noqa: F401
    # errors
    ContractError,
    StructuralError,
    OrderError,
    ParseError,
    TypeError,
    # spaces and measures
    Space,
    FiniteMeasure,
    add,
    scale,
    leq,
    sub,
    max_pointwise_diff,
    pushforward_real,
    product_measure,
    binop_pushforward,
    prune_floor,
    set_prune_floor,
    Kernel,
    kernel_apply,
    kernel_compose,
    integrate,
    # series
    Ball,
    AnalyticSeries,
    SymCoeffs,
    polarize,
    series_add,
    series_scale,
    series_mul,
    series_max_coeff_diff,
    taylor_grade,
    local_shift,
    compose_series,
    # total monotonicity
    fdiff,
    TotMonWitness,
    TotMonReport,
    check_total_monotone,
    # fixpoints
    FixpointResult,
    kleene_fixpoint,
    kleene_fixpoint1,
    # coherence spaces
    Pcs,
    PcsVector,
    NormResult,
    norm,
    membership,
    vec_add,
    vec_scale,
    PcsMatrix,
    mat_apply,
    mat_compose,
    is_morphism,
    mat_norm_estimate,
    promote,
    power_series_apply,
    nat_convolve,
    convolution_series_matrix,
    # the probabilistic language
    GridConfig,
    EvalDiag,
    reprint,
    typecheck,
    eval_program,
    eval_program_diag,
    GeometricResult,
    run_geometric,
    program_names,
    program_source,
    wide_grid,
    unit_grid,
    integer_grid,
    default_grid,
    # the binary tree example
    TreeVector,
    tree_max_diff,
    is_additive,
    antichain_norm,
    theta_apply,
    cantor_leaf_space,
    to_measure,
    from_measure,
    # invariant suites
    SuiteCase,
    SuiteResult,
    suite_names,
    run_suite,
)

__version__ = "0.1.0"
