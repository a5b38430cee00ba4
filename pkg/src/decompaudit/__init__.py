"""Signal-decomposition time-series forecasting with a leakage audit harness.

Decomposition-based forecasting pipelines commonly decompose a whole series
before splitting it, which quietly feeds future information into pre-cutoff
feature values. This package implements both that leaked protocol and a
strictly causal per-step alternative over EMD, DWT and SSA, trains small
forecasters on each, and quantifies the accuracy inflation the leak causes.
"""

__version__ = "0.1.0"

from .errors import (
    DecompAuditError,
    IllConditionedError,
    InsufficientDataError,
    InvalidConfigError,
    InvalidInputError,
    NumericOverflowError,
)
from .series import (
    MinMaxParams,
    SplitSpec,
    TimeSeries,
    WindowSpec,
    make_windows,
    minmax_apply,
    minmax_fit,
    minmax_invert,
    split_chronological,
)
from .decompose import ComponentSet, decompose
from .decompose.dwt import DB5_LOWPASS, DwtConfig, dwt_decompose, quadrature_mirror
from .decompose.emd import EmdConfig, emd_decompose, extrema_zero_crossing_gap
from .decompose.ssa import SsaConfig, ssa_decompose
from .pipeline import (
    CausalScheduleConfig,
    ChannelScaler,
    FeatureMatrix,
    PipelineMode,
    WindowStack,
    build_test_features_causal,
    build_test_features_leaked,
    build_train_features,
    causal_window,
    leaked_test_windows,
    raw_test_windows,
    select_components,
    train_windows,
)
from .models import (
    AdagradState,
    AdamState,
    MlpParams,
    RidgeParams,
    TrainConfig,
    TrainingHistory,
    adagrad_step,
    adam_step,
    mlp_forward,
    mlp_gradient,
    mlp_init,
    params_from_json,
    params_to_json,
    persistence_predict,
    ridge_fit,
    train_mlp,
)
from .metrics import (
    MetricsReport,
    compute_metrics,
    regularized_incomplete_beta,
    welch_t_test,
)
from .spectral import Spectrum, dominant_frequency, fft, ifft, power_spectrum
from .synth import SyntheticSpec, gen_synthetic, standard_fixture_spec
from .datasets import DATASET_REGISTRY, load_csv, verify_against_registry
from .harness import (
    AuditVerdict,
    ExperimentConfig,
    ExperimentResult,
    ResultRow,
    audit_leakage,
    emit_reports,
    fixture_experiment_config,
    run_ablation,
    run_experiment,
    run_summation,
)
