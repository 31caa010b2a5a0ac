"""Fisher information and MMSE estimation from i.i.d. samples, with
finite-sample error bounds and sample-complexity calculators for data
observed through additive Gaussian noise."""

from .bounds import (
    ComplexityResult,
    ComplexitySearchSpec,
    ErrorBudget,
    GaussianBoundConstants,
    TailModel,
    ZeroCount,
    bhattacharya_error_bound,
    bhattacharya_precision,
    clipped_error_bound,
    clipped_precision,
    confidence_bound,
    count_derivative_zeros,
    gaussian_tail_model,
    lemma1_constants,
    lemma2_tail,
    modified_error_bound,
    sample_complexity,
    tail_model_for_channel,
)
from .channel import (
    ChannelModel,
    InputLaw,
    binary_channel,
    gaussian_channel,
    sample_channel,
    trial_seed,
    true_density,
    true_density_deriv,
    true_fisher,
    true_mmse,
    true_score,
)
from .errors import (
    HypothesisViolationError,
    InfeasibleTargetError,
    QuadratureError,
    UnsupportedOracleError,
)
from .estimators import (
    EstimateResult,
    EstimatorConfig,
    EstimatorKind,
    bhattacharya,
    clipped,
    constant_clip_envelope,
    default_bandwidth,
    default_truncation,
    estimate,
    lemma_clip_envelope,
    mmse_from_fisher,
    score_at,
)
from .experiments import (
    ExperimentConfig,
    ExperimentKind,
    ExperimentReport,
    run_complexity,
    run_density_overlay,
    run_experiment,
    run_histogram,
    run_snr_sweep,
)
from .kernels import (
    GAUSSIAN_KERNEL,
    KernelSpec,
    dkw_tail,
    empirical_cdf,
    kde_at,
    kde_deriv_at,
    kde_profile,
    sup_deviation_tail,
)
from .quadrature import integrate, integrate_values, simpson_nodes
from .samples import SampleSet

__version__ = "0.1.0"
