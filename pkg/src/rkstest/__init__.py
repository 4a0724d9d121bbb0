"""Two-sample testing with ridge-spline maximum mean discrepancy.

The test statistic is the largest mean discrepancy between two samples
over neural-network ridge splines of a given degree with unit path
seminorm.  The package bundles the projected-Adam optimizer used to
search that class, exact small-instance oracles, classical baselines,
permutation calibration, an asymptotic-null simulator, benchmark
samplers, and an experiment harness, all behind one CLI (``rks``).
"""

from .baselines import (
    Estimator,
    KernelKind,
    KernelSpec,
    energy_distance,
    kernel_mmd2,
    lrt_oracle,
    median_heuristic,
)
from .calibrate import (
    PermutationResult,
    PValueMode,
    fixed_threshold_test,
    permutation_test,
)
from .errors import (
    DataFormatError,
    DegenerateScale,
    DimensionMismatch,
    EmptyGrid,
    EmptyInput,
    InvalidSpec,
    NotPSD,
    RksError,
    TooFewSamples,
    TooLarge,
    UnknownSetting,
    UnsupportedDegree,
    ZeroDiscrepancy,
    ZeroSeminorm,
)
from .gen import (
    DEFAULT_V,
    Role,
    SettingName,
    SettingSpec,
    log_density,
    sample,
    sample_null_mixture,
)
from .harness import (
    METHODS,
    ExperimentConfig,
    ExperimentRecord,
    RocCurve,
    read_experiment_csv,
    roc_from_stats,
    run_experiment,
    write_experiment_csv,
)
from .model import (
    Label,
    MMDResult,
    SampleSet,
    Standardization,
    StandardizedPair,
    canonical_pair,
    destandardize_value,
    read_sample_csv,
    standardize,
    write_sample_csv,
)
from .nulldist import (
    GpGrid,
    default_grid,
    estimate_covariance,
    simulate_sup,
)
from .opt import OptConfig, OptTrace, multi_restart, optimize
from .ridge import (
    Objective,
    RidgeGradient,
    RidgeNetwork,
    discrepancy,
    evaluate,
    grad_objective,
    normalize_to_unit_ball,
    path_seminorm,
    read_network_csv,
    write_network_csv,
)
from .seeds import derive_seed
from .statistic import (
    K0Surrogate,
    RksConfig,
    compute_rks,
    k0_surrogate,
    quasi_uniform_directions,
    rks_exact_1d,
    rks_exact_halfspace_2d,
    rks_grid_oracle,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_V",
    "METHODS",
    "DataFormatError",
    "DegenerateScale",
    "DimensionMismatch",
    "EmptyGrid",
    "EmptyInput",
    "Estimator",
    "ExperimentConfig",
    "ExperimentRecord",
    "GpGrid",
    "InvalidSpec",
    "K0Surrogate",
    "KernelKind",
    "KernelSpec",
    "Label",
    "MMDResult",
    "NotPSD",
    "Objective",
    "OptConfig",
    "OptTrace",
    "PValueMode",
    "PermutationResult",
    "RidgeGradient",
    "RidgeNetwork",
    "RksConfig",
    "RksError",
    "RocCurve",
    "Role",
    "SampleSet",
    "SettingName",
    "SettingSpec",
    "Standardization",
    "StandardizedPair",
    "TooFewSamples",
    "TooLarge",
    "UnknownSetting",
    "UnsupportedDegree",
    "ZeroDiscrepancy",
    "ZeroSeminorm",
    "canonical_pair",
    "compute_rks",
    "default_grid",
    "derive_seed",
    "destandardize_value",
    "discrepancy",
    "energy_distance",
    "estimate_covariance",
    "evaluate",
    "fixed_threshold_test",
    "grad_objective",
    "k0_surrogate",
    "kernel_mmd2",
    "log_density",
    "lrt_oracle",
    "median_heuristic",
    "multi_restart",
    "normalize_to_unit_ball",
    "optimize",
    "path_seminorm",
    "permutation_test",
    "quasi_uniform_directions",
    "read_experiment_csv",
    "read_network_csv",
    "read_sample_csv",
    "rks_exact_1d",
    "rks_exact_halfspace_2d",
    "rks_grid_oracle",
    "roc_from_stats",
    "run_experiment",
    "sample",
    "sample_null_mixture",
    "simulate_sup",
    "standardize",
    "write_experiment_csv",
    "write_network_csv",
    "write_sample_csv",
]
