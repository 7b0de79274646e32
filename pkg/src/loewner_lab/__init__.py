"""Randomized Loewner-order checks of operator Jensen, Hoelder-McCarthy and Bellman inequalities."""
from .errors import (
    ConfigError,
    ConvergenceError,
    DimensionError,
    DomainError,
    LoewnerLabError,
    ParameterError,
    PreconditionError,
)
from .hermitian import (
    BACKEND,
    DEFAULT_TOL,
    CheckResult,
    FunctionSpec,
    HermitianMatrix,
    Interval,
    SpectralDecomposition,
    Tolerances,
    apply_fn,
    eig,
    hermitize,
    loewner_geq,
    spectrum_in,
)
from .inequalities import (
    ScalarBellmanInstance,
    check_entropy_mean,
    check_holder_mccarthy,
    check_jensen,
    check_log_mean,
    check_mean_jensen,
    check_operator_bellman,
    embed_scalars,
    scalar_bellman_gap,
    transform_mp1_to_mp3,
    transform_mp3_to_mp1,
)
from .means import (
    PositiveLinearMap,
    apply_map,
    arithmetic_mean,
    harmonic_mean,
    is_unital,
    make_map,
    random_unital_map,
)
from .generators import random_contraction, random_hermitian
from .runner import Counterexample, SuiteReport, TrialConfig, run_suite, search_counterexample
from .report import write_report

__version__ = "0.1.0"
