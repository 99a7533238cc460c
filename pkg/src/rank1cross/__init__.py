"""Rank-1 cross approximation by alternating max-modulus pivot search.

The package builds rank-1-plus-noise random matrix models, runs the pivot
search in three start/stop variants, evaluates every closed-form probability
and error bound that governs the search, validates those bounds against
independent oracles, and reproduces the ratio-sweep Monte Carlo experiments
as deterministic, seeded runs with CSV and figure output.
"""

from .bounds import (
    BoundDomainError,
    BoundInputs,
    BoundReport,
    Probability,
    WalkConstants,
    any_large_coord_probability,
    bad_column_coefficient,
    bad_column_coefficient_upper,
    bad_coordinate_fraction,
    chi2_rate_degradation,
    chi2_tail_coefficient,
    chi2_tail_threshold,
    columns_needed,
    cross_error_bound,
    cross_error_bound_real,
    cross_error_bound_simplified,
    evaluate_bounds,
    fixed_step_quality_sequence,
    good_start_probability,
    is_mu_coherent,
    mu_coherence_probability,
    noise_bound_from_spectrum,
    noise_bound_unitary,
    quality_thresholds,
    small_coord_coefficient,
    walk_constants,
    worst_case_error_bound,
)
from .experiments import (
    DEFAULT_RATIOS,
    BoundCurveRow,
    ExperimentConfig,
    ExperimentResult,
    SummaryRow,
    TrialRecord,
    bound_curves,
    run_experiment,
    run_trial,
)
from .figures import render_figures
from .matrixio import MatrixParseError, read_matrix, write_matrix
from .maxvol import (
    Pivot,
    PivotTrace,
    QualityLabels,
    cross_residual,
    label_quality,
    maxvol_fixed_steps,
    maxvol_max_among_viewed,
    maxvol_rank1,
    pivot_at,
    scan_start_column,
)
from .model import (
    RankOneModel,
    SingularSpectrumSpec,
    build_independent_noise_model,
    build_ratio_model,
    cnorm,
    sample_haar_orthonormal,
    sample_sphere_vector,
)
from .oracle import (
    QuadratureError,
    TailEstimate,
    best_cross_residual,
    chi2_tail_exact,
    fisher_tail_mc,
    global_argmax,
    sphere_tail_mc,
)
from .selftest import run_selftest

__version__ = "0.1.0"
