"""Potential CRPS (PC) and PC skill (PCS) of deterministic forecasts.

The potential CRPS of a model's output is the mean in-sample CRPS of the
isotonic distributional regression (IDR) fit of the outcomes on that output:
the best achievable probabilistic score under the sole assumption that
larger model output means stochastically larger outcomes. PCS normalizes it
against the unconditional climatology score PC0 (half the Gini mean
difference of the outcomes), giving a skill in [0, 1] that is invariant
under strictly increasing transformations of the model output.

The package adds the usual deterministic baselines (RMSE, MAE, quantile
loss, ACC, CPA), latitude-weighted gridded evaluation, a block permutation
test for model comparison, and a Gamma-world simulation study, all behind a
small CLI (``pcskill pc | grid-eval | compare | simulate``).
"""

from .core import (
    CellResult,
    EvalReport,
    GridField,
    PairedSample,
    StepDistribution,
    aggregate_cells,
    check_same_coords,
    cos_lat_weight,
    from_ensemble,
    make_sample,
    make_step_distribution,
)
from .errors import (
    AllOutcomesEqualError,
    AlphaOutOfRangeError,
    ConvergenceFailureError,
    CoordinateMismatchError,
    DegenerateClimatologyWarning,
    DegenerateVarianceWarning,
    EmptyEnsembleError,
    EmptySeriesError,
    GridParseError,
    InsufficientDataError,
    LastNotOneError,
    LatitudeOutOfRangeError,
    LengthMismatchError,
    NonFiniteValueError,
    NonPositiveWeightError,
    NotMonotoneCdfError,
    NotSortedError,
    ParseError,
    SampleMismatchError,
    SeriesParseError,
    VerificationError,
)
from .fileio import read_grid, read_series, write_grid, write_series
from .grid import (
    SkillCell,
    evaluate_grid,
    lat_weight,
    resolve_threads,
    skill_vs_reference,
)
from .idr import IdrFit, fit_idr, in_sample_distributions, predict
from .inference import (
    PermutationResult,
    PValueField,
    block_permutation_test,
    gridpoint_p_values,
)
from .metrics import (
    METRIC_COLUMNS,
    MetricTable,
    acc,
    cpa,
    cpa_pairwise,
    mae,
    quantile_loss,
    rmse,
)
from .pav import PavResult, pav_antitonic, pav_isotonic, pav_quantile
from .scoring import (
    PcSummary,
    crps,
    crps_energy,
    in_sample_crps_series,
    mean_crps,
    pc,
    pc0,
    pc0_pairwise,
    pcs,
    tw_crps,
)
from .sim import MODEL_LABELS, SimConfig, draw_world, forecasters, gamma_quantile, run_study

__version__ = "0.1.0"

__all__ = [
    "AllOutcomesEqualError",
    "AlphaOutOfRangeError",
    "CellResult",
    "ConvergenceFailureError",
    "CoordinateMismatchError",
    "DegenerateClimatologyWarning",
    "DegenerateVarianceWarning",
    "EmptyEnsembleError",
    "EmptySeriesError",
    "EvalReport",
    "GridField",
    "GridParseError",
    "IdrFit",
    "InsufficientDataError",
    "LastNotOneError",
    "LatitudeOutOfRangeError",
    "LengthMismatchError",
    "METRIC_COLUMNS",
    "MODEL_LABELS",
    "MetricTable",
    "NonFiniteValueError",
    "NonPositiveWeightError",
    "NotMonotoneCdfError",
    "NotSortedError",
    "PValueField",
    "PairedSample",
    "ParseError",
    "PavResult",
    "PcSummary",
    "PermutationResult",
    "SampleMismatchError",
    "SeriesParseError",
    "SimConfig",
    "SkillCell",
    "StepDistribution",
    "VerificationError",
    "acc",
    "aggregate_cells",
    "block_permutation_test",
    "check_same_coords",
    "cos_lat_weight",
    "cpa",
    "cpa_pairwise",
    "crps",
    "crps_energy",
    "draw_world",
    "evaluate_grid",
    "fit_idr",
    "forecasters",
    "from_ensemble",
    "gamma_quantile",
    "gridpoint_p_values",
    "in_sample_crps_series",
    "in_sample_distributions",
    "lat_weight",
    "mae",
    "make_sample",
    "make_step_distribution",
    "mean_crps",
    "pav_antitonic",
    "pav_isotonic",
    "pav_quantile",
    "pc",
    "pc0",
    "pc0_pairwise",
    "pcs",
    "predict",
    "quantile_loss",
    "read_grid",
    "read_series",
    "resolve_threads",
    "rmse",
    "run_study",
    "skill_vs_reference",
    "tw_crps",
    "write_grid",
    "write_series",
]
