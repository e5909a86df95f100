import numpy as np
import pytest

from evospec.checks import DegenerateSpectrumError, GridMismatchError
from evospec.grid import TimeFreqGrid, build_grid, frequency_points
from evospec.hypotheses import (
    NULL_BUILDERS,
    TestResult,
    null_separable,
    null_stationary,
    null_white_noise,
    run_test,
    significance_code,
    validate_model_spectrum,
)
from evospec.scr import bootstrap_distribution
from evospec.simulators import ModelSpec, constant, simulate
from evospec.spectral import SpectralSurface, TimeSeries, spectral_surface
from evospec.utils import substream

N, n, B_n = 400, 40, 10
GRID = build_grid(N, n, B_n)


@pytest.fixture(scope="module")
def dist():
    return bootstrap_distribution(N, GRID, N_MC=100, seed=3)


@pytest.fixture(scope="module")
def series():
    return TimeSeries(np.random.default_rng(1).standard_normal(N))


def surface_from(fn, grid=GRID):
    u, theta = np.meshgrid(grid.u_points, grid.theta_points, indexing="ij")
    return SpectralSurface(grid, fn(u, theta))


def test_white_noise_null_keeps_flat_surfaces():
    surface = surface_from(lambda u, theta: 1 + u + 0 * theta)
    assert np.allclose(null_white_noise(surface).values, surface.values)


def test_white_noise_null_averages_over_frequency():
    null = null_white_noise(surface_from(lambda u, theta: theta))
    assert np.allclose(null.values, np.pi / 2)


def test_stationary_null_averages_over_time():
    grid = TimeFreqGrid(u_points=[0.25, 0.75], theta_points=frequency_points(4), n=10, B_n=4, N=100)
    surface = surface_from(lambda u, theta: np.where(u < 0.5, 1.0, 3.0) * (1 + theta), grid)

    null = null_stationary(surface)

    assert np.allclose(null.values, 2 * (1 + grid.theta_points)[None, :])


def test_stationary_null_keeps_constant_in_time_surfaces():
    surface = surface_from(lambda u, theta: 1 + np.cos(theta) ** 2 + 0 * u)
    assert np.allclose(null_stationary(surface).values, surface.values)


def test_separable_null_reproduces_products():
    surface = surface_from(lambda u, theta: (1 + u ** 2) * (2 + np.cos(theta)))
    assert np.allclose(null_separable(surface).values, surface.values, rtol=1e-12)


def test_separable_null_has_rank_one():
    values = np.random.default_rng(2).uniform(0.5, 2.0, GRID.shape)
    null = null_separable(SpectralSurface(GRID, values))

    assert np.linalg.matrix_rank(null.values) == 1


def test_every_null_keeps_constants():
    surface = SpectralSurface(GRID, np.full(GRID.shape, 0.7))
    for build in NULL_BUILDERS.values():
        assert np.allclose(build(surface).values, 0.7)


def test_separable_null_rejects_zero_integral():
    with pytest.raises(DegenerateSpectrumError):
        null_separable(surface_from(lambda u, theta: np.cos(theta) + 0 * u))


@pytest.mark.parametrize(
    "p, code", [(0.0005, "***"), (0.005, "**"), (0.02, "*"), (0.07, "+"), (0.5, ""), (1.0, "")]
)
def test_significance_code(p, code):
    assert significance_code(p) == code


def test_identity_null_is_never_rejected(series, dist):
    result = run_test(series, lambda s: s, n, B_n, dist=dist)

    assert isinstance(result, TestResult)
    assert result.statistic == 0
    assert result.p_value == 1.0
    assert not result.reject


def test_unknown_null(series, dist):
    with pytest.raises(ValueError, match="Unknown null"):
        run_test(series, "trend", n, B_n, dist=dist)


@pytest.mark.parametrize("null", sorted(NULL_BUILDERS))
def test_rejection_matches_critical_value(series, dist, null):
    result = run_test(series, null, n, B_n, dist=dist)

    assert result.reject == (result.statistic > result.gamma_alpha ** 2)
    assert 0 < result.p_value <= 1
    assert result.config == {
        "n": n,
        "B_n": B_n,
        "C_n": GRID.C_n,
        "N": N,
        "N_MC": 100,
        "seed": 3,
        "alpha": 0.05,
    }
    assert result.to_dict()["significance"] == significance_code(result.p_value)


def test_statistics_are_scale_equivariant(series, dist):
    plain = run_test(series, "stationarity", n, B_n, dist=dist)
    scaled = run_test(series.scaled(5.0), "stationarity", n, B_n, dist=dist)

    assert scaled.statistic == pytest.approx(plain.statistic, rel=1e-9)
    assert scaled.p_value == plain.p_value
    assert scaled.reject == plain.reject


def test_run_test_bootstraps_when_no_distribution_is_given(series, dist):
    fresh = run_test(series, "white-noise", n, B_n, N_MC=100, seed=3)
    shared = run_test(series, "white-noise", n, B_n, dist=dist)

    assert fresh.gamma_alpha == shared.gamma_alpha
    assert fresh.p_value == shared.p_value


def test_run_test_checks_distribution_grid(series):
    other = build_grid(N, n, 8)
    with pytest.raises(GridMismatchError):
        run_test(series, "white-noise", n, B_n, dist=bootstrap_distribution(N, other, N_MC=100))


def test_validate_own_estimate(series, dist):
    estimate = spectral_surface(series, GRID)
    result = validate_model_spectrum(series, estimate, n, B_n, dist=dist)

    assert result.statistic == 0
    assert result.p_value == 1.0


def test_validate_rejects_wrong_level():
    N_long, n_long, B_long = 1024, 128, 16
    grid = build_grid(N_long, n_long, B_long)
    series = TimeSeries(np.random.default_rng(4).standard_normal(N_long))
    wrong = SpectralSurface(grid, np.full(grid.shape, 10 / (2 * np.pi)))

    result = validate_model_spectrum(series, wrong, n_long, B_long, N_MC=200, seed=0)

    assert result.reject
    assert result.p_value < 0.01


def test_validate_checks_grid(series, dist):
    other = build_grid(N, 50, B_n)
    with pytest.raises(GridMismatchError):
        validate_model_spectrum(series, SpectralSurface(other, np.ones(other.shape)), n, B_n, dist=dist)


@pytest.mark.slow
def test_white_noise_null_is_closer_to_the_truth_than_the_estimate():
    grid = build_grid(800, 72, 32)
    f = 1 / (2 * np.pi)
    closer = []

    for rep in range(100):
        surface = spectral_surface(TimeSeries(substream(11, rep).standard_normal(800)), grid)
        g = null_white_noise(surface).values
        closer.append(np.max(np.abs(g - f)) < np.max(np.abs(surface.values - f)))

    assert np.mean(closer) >= 0.9


@pytest.mark.slow
def test_stationary_series_pass_the_stationarity_test():
    spec = ModelSpec("tv_ar1", {"a": constant(0.3)}, name="ar1")
    N, n, B_n = 800, 100, 12
    dist = bootstrap_distribution(N, build_grid(N, n, B_n), N_MC=500, seed=0)

    p_values = [
        run_test(simulate(spec, N, 5, rep), "stationarity", n, B_n, dist=dist).p_value
        for rep in range(100)
    ]

    assert np.mean(np.array(p_values) > 0.2) >= 0.8
