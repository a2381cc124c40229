"""
Core modules for the largest-claims treaty laboratory
"""

# Models
from .errors import (
    ConfigError,
    DegenerateSampleError,
    DomainError,
    InsufficientSampleError,
    TreatyLabError,
    UnsupportedDependenceError,
    WrongMdaError,
)
from .streams import CLAIMS, COUNTING, LIMIT, RandomStream, StreamFactory
from .marginals import MarginalModel, MdaClass
from .dependence import BivariateClaimModel, DependenceModel
from .norming import MarginalNorming, NormingConstants, mean_excess, norming_constants
from .counting import CountDraw, CountingModel
from .treaties import (
    OrderStats,
    TreatySpec,
    normalize_treaty,
    preset_coeffs,
    sample_top_claims_renyi,
    top_order_statistics,
    treaty_value,
)
from .premium import PremiumMoments, premium_moments, pure_premium

# Limit laws and statistics
from .limitlaws import (
    ArrivalTimes,
    ExtremalVariate,
    LimitDraws,
    LimitMoments,
    TreatyLimitSpec,
    build_limit_spec,
    extremal_log_density,
    extremal_moments,
    harmonic_K,
    sample_gumbel_extremal,
    sample_prop3_series,
    sample_spacings_representation,
    sample_treaty_limit,
    transform_extremal,
    treaty_limit_moments,
    uncorrected_moments,
)
from .stats import EmpiricalSample, StreamingMoments, ks_one_sample, ks_two_sample, pearson_corr, sample_moments

# Harness
from .config import ExperimentConfig, load_config, parse_config
from .experiment import (
    ExperimentResult,
    HorizonSummary,
    ReportRow,
    run_convergence_experiment,
    run_limit,
    run_simulation,
)
from .report import generate_text_report, read_report, write_csv

__all__ = [
    # Models
    'TreatyLabError',
    'DomainError',
    'InsufficientSampleError',
    'DegenerateSampleError',
    'UnsupportedDependenceError',
    'WrongMdaError',
    'ConfigError',
    'RandomStream',
    'StreamFactory',
    'CLAIMS',
    'COUNTING',
    'LIMIT',
    'MarginalModel',
    'MdaClass',
    'DependenceModel',
    'BivariateClaimModel',
    'MarginalNorming',
    'NormingConstants',
    'mean_excess',
    'norming_constants',
    'CountDraw',
    'CountingModel',
    'TreatySpec',
    'OrderStats',
    'preset_coeffs',
    'top_order_statistics',
    'sample_top_claims_renyi',
    'treaty_value',
    'normalize_treaty',
    'PremiumMoments',
    'pure_premium',
    'premium_moments',
    # Limit laws and statistics
    'ArrivalTimes',
    'ExtremalVariate',
    'LimitDraws',
    'LimitMoments',
    'TreatyLimitSpec',
    'build_limit_spec',
    'harmonic_K',
    'extremal_moments',
    'uncorrected_moments',
    'sample_gumbel_extremal',
    'transform_extremal',
    'extremal_log_density',
    'sample_spacings_representation',
    'sample_treaty_limit',
    'sample_prop3_series',
    'treaty_limit_moments',
    'EmpiricalSample',
    'StreamingMoments',
    'ks_two_sample',
    'ks_one_sample',
    'sample_moments',
    'pearson_corr',
    # Harness
    'ExperimentConfig',
    'parse_config',
    'load_config',
    'ReportRow',
    'HorizonSummary',
    'ExperimentResult',
    'run_simulation',
    'run_limit',
    'run_convergence_experiment',
    'write_csv',
    'read_report',
    'generate_text_report',
]
