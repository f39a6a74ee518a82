"""Robust multiple statistical classification from labeled training data.

Empirical training distributions stand in as nominals for a Scheffé-set
deviation test; the package provides the test, its non-asymptotic error
bounds in both small- and large-alphabet regimes, exact small-instance
error oracles, and a reproducible Monte Carlo harness with a CLI.
"""

from . import errors
from .bounds import (
    BOUND_VARIANTS,
    BoundParams,
    BoundReport,
    Regime,
    alphabet_growth_limit,
    combined_bound,
    delta_star,
    dgl_error_bound,
    estimation_epsilon,
    estimation_error_bound,
    exponent_chain,
    nominal_min_tv_lower_bound,
    theorem_bound,
)
from .classifier import (
    Classifier,
    RobustnessReport,
    classify,
    map_decide,
    robustness_report,
    train,
)
from .distributions import (
    ChernoffResult,
    Distribution,
    Sequence,
    chernoff,
    empirical,
    read_distribution,
    read_sequence,
    sample,
    total_variation,
    validate_distribution,
    write_distribution,
    write_sequence,
)
from .kernels import active_backend
from .montecarlo import (
    ExperimentConfig,
    LargeAlphabetFamilySpec,
    ResultRow,
    TrialResult,
    estimate_error_fixed_nominals,
    fig1_config,
    fig1_truths,
    fig2_config,
    large_alphabet_family,
    run_experiment,
    run_trial,
    training_length,
    wilson_interval,
)
from .oracle import (
    enumerate_histograms,
    exact_dgl_error,
    exact_map_error,
    histogram_count,
)
from .rng import derive_seed, philox_stream, splitmix64
from .scheffe import (
    DglDecision,
    ScheffeSystem,
    build_scheffe_system,
    dgl_decide,
    dgl_statistic,
)

__version__ = "1.0.0"

__all__ = [
    "BOUND_VARIANTS",
    "BoundParams",
    "BoundReport",
    "ChernoffResult",
    "Classifier",
    "DglDecision",
    "Distribution",
    "ExperimentConfig",
    "LargeAlphabetFamilySpec",
    "Regime",
    "ResultRow",
    "RobustnessReport",
    "ScheffeSystem",
    "Sequence",
    "TrialResult",
    "active_backend",
    "alphabet_growth_limit",
    "build_scheffe_system",
    "chernoff",
    "classify",
    "combined_bound",
    "delta_star",
    "derive_seed",
    "dgl_decide",
    "dgl_error_bound",
    "dgl_statistic",
    "empirical",
    "enumerate_histograms",
    "errors",
    "estimate_error_fixed_nominals",
    "estimation_epsilon",
    "estimation_error_bound",
    "exact_dgl_error",
    "exact_map_error",
    "exponent_chain",
    "fig1_config",
    "fig1_truths",
    "fig2_config",
    "histogram_count",
    "large_alphabet_family",
    "map_decide",
    "nominal_min_tv_lower_bound",
    "philox_stream",
    "read_distribution",
    "read_sequence",
    "robustness_report",
    "run_experiment",
    "run_trial",
    "sample",
    "splitmix64",
    "theorem_bound",
    "total_variation",
    "train",
    "training_length",
    "validate_distribution",
    "wilson_interval",
    "write_distribution",
    "write_sequence",
]
