__version__ = "0.1.0"

from .kernels import tau, lag_window, lag_window_sq_integral, taper_sq_integral, taper_fourth_integral
from .grid import TimeFreqGrid, default_C_n, build_grid
from .spectral import (
    TimeSeries,
    SpectralSurface,
    stft,
    local_periodogram,
    local_autocov,
    spectral_estimate,
    spectral_surface,
    evaluate_surface,
    asymptotic_variance,
    normalized_stft_pair,
    remove_local_mean,
)
from .scr import (
    BootstrapDistribution,
    SCR,
    bootstrap_distribution,
    critical_value,
    build_scr,
    gumbel_critical_value,
    max_relative_deviation,
    scr_contains,
)
from .tuning import TuningSelection, candidate_bounds, mv_select
from .hypotheses import (
    TestResult,
    null_white_noise,
    null_stationary,
    null_separable,
    run_test,
    validate_model_spectrum,
)
from .whittle import (
    TvArmaModel,
    tvarma_spectrum,
    local_whittle_objective,
    fit_tvarma,
    model_surface,
    select_order_aic,
)
from .simulators import ModelSpec, preset, simulate, true_spectrum, monte_carlo_spectrum
from .experiments import (
    ExperimentReport,
    coverage_experiment,
    power_experiment,
    validation_experiment,
)
from .access import ingest_csv
