import json
from collections import Counter

import numpy as np
import pandas as pd
import pytest
from scipy.integrate import trapezoid

from evospec.grid import build_grid
from evospec.simulators import ModelSpec, constant, preset, simulate
from evospec.spectral import TimeSeries
from evospec.utils import substream
from evospec.whittle import (
    TvArmaModel,
    best_order,
    coeffs_to_pacf,
    coefficients_at,
    decode_params,
    default_u_grid,
    default_window,
    encode_params,
    fit_tvarma,
    fourier_periodogram,
    local_whittle_objective,
    model_surface,
    pacf_to_coeffs,
    select_order_aic,
    tvarma_spectrum,
    unit_spectrum,
)

U_GRID = np.linspace(0.15, 0.85, 5)


def flat_model(sigma2=2 * np.pi, u_grid=(0.01, 0.99)):
    m = len(u_grid)
    return TvArmaModel(
        p=0, q=0, u_grid=u_grid, ar_coeffs=np.zeros((m, 0)), ma_coeffs=np.zeros((m, 0)),
        sigma2=np.full(m, sigma2), window=64,
    )


@pytest.fixture(scope="module")
def ar1_series():
    return simulate(ModelSpec("tv_ar1", {"a": constant(0.5)}), 4096, 0)


def test_ar1_spectrum_value():
    assert unit_spectrum([-0.3], [], 0.0) == pytest.approx(1 / (2 * np.pi * 0.49))
    assert unit_spectrum([-0.3], [], 0.0) == pytest.approx(0.324806, abs=1e-6)


def test_white_noise_spectrum():
    theta = np.linspace(0, np.pi, 9)
    assert np.allclose(unit_spectrum([], [], theta), 1 / (2 * np.pi))


def test_spectrum_is_even_in_frequency():
    theta = np.linspace(0.1, 3.0, 7)
    ar, ma = [-0.4, 0.2], [0.5]
    assert np.allclose(unit_spectrum(ar, ma, theta), unit_spectrum(ar, ma, -theta))


def test_unit_root_is_rejected():
    with pytest.raises(ValueError, match="unit root"):
        unit_spectrum([-1.0], [], 0.0)


def test_pacf_map_gives_causal_polynomials():
    rng = np.random.default_rng(0)
    for _ in range(50):
        ar, ma = decode_params(rng.normal(size=5), 3, 2)
        model = TvArmaModel(
            p=3, q=2, u_grid=[0.5], ar_coeffs=[ar], ma_coeffs=[ma], sigma2=[1.0], window=64
        )
        assert model.is_causal_invertible()


def test_pacf_map_inverse():
    pacf = np.array([0.5, -0.3, 0.2])
    assert np.allclose(coeffs_to_pacf(pacf_to_coeffs(pacf)), pacf)

    ar, ma = decode_params([0.3, -0.2, 0.7], 2, 1)
    assert np.allclose(encode_params(ar, ma), [0.3, -0.2, 0.7])


def test_objective_at_matching_periodogram():
    K, level = 40, 0.8
    value = local_whittle_objective([], np.full(K, level), 0, 0)

    assert value == pytest.approx(K * (np.log(level) + 1))


def test_objective_is_smallest_at_the_generating_parameters():
    freqs = 2 * np.pi * np.arange(1, 101) / 201
    truth = np.arctanh(0.5)
    I = 1.7 * unit_spectrum([-0.5], [], freqs)

    def objective(x):
        return local_whittle_objective([x], I, 1, 0, frequencies=freqs)

    assert objective(truth) < objective(truth + 0.3) < objective(truth + 0.6)
    assert objective(truth) < objective(truth - 0.3) < objective(truth - 0.6)


def test_fixed_sigma2_is_never_better_than_profiled():
    freqs = 2 * np.pi * np.arange(1, 51) / 101
    I = np.random.default_rng(1).exponential(size=50)

    profiled = local_whittle_objective([0.2], I, 1, 0, frequencies=freqs)
    for s in (0.5, 1.0, 3.0):
        assert local_whittle_objective([0.2], I, 1, 0, frequencies=freqs, sigma2=s) >= profiled - 1e-9


def test_fourier_periodogram_frequencies():
    frequencies, values = fourier_periodogram(TimeSeries(np.ones(200)), 0.5, 65)

    assert len(frequencies) == len(values) == 32
    assert frequencies[0] == pytest.approx(2 * np.pi / 65)


def test_fit_recovers_ar1(ar1_series):
    model = fit_tvarma(ar1_series, 1, 0, U_GRID, 512)

    phi = -model.ar_coeffs[:, 0]
    assert np.mean(np.abs(phi - 0.5)) < 0.08
    assert np.all(np.abs(model.sigma2 - 1) < 0.35)
    assert model.converged.all()
    assert model.is_causal_invertible()


def test_fit_reaches_the_generating_objective(ar1_series):
    model = fit_tvarma(ar1_series, 1, 0, U_GRID, 512)

    for j, u in enumerate(U_GRID):
        frequencies, I = fourier_periodogram(ar1_series, u, 512)
        at_truth = local_whittle_objective([np.arctanh(0.5)], I, 1, 0, frequencies=frequencies)
        assert model.objective[j] <= at_truth + 1e-6


def test_fit_on_white_noise():
    series = TimeSeries(np.random.default_rng(2).standard_normal(4096))
    model = fit_tvarma(series, 1, 0, U_GRID, 512)

    assert np.mean(np.abs(model.ar_coeffs)) < 0.15


def test_white_noise_variance_is_profiled():
    series = TimeSeries(np.random.default_rng(3).standard_normal(2048))
    model = fit_tvarma(series, 0, 0, [0.5], 256)

    frequencies, I = fourier_periodogram(series, 0.5, 256)
    assert model.sigma2[0] == pytest.approx(2 * np.pi * I.mean())


def test_fit_is_reproducible(ar1_series):
    a = fit_tvarma(ar1_series, 1, 1, U_GRID, 512, seed=4)
    b = fit_tvarma(ar1_series, 1, 1, U_GRID, 512, seed=4, n_jobs=3)

    assert np.array_equal(a.ar_coeffs, b.ar_coeffs)
    assert np.array_equal(a.ma_coeffs, b.ma_coeffs)


def test_fit_argument_checks(ar1_series):
    with pytest.raises(ValueError):
        fit_tvarma(ar1_series, 1, 0, U_GRID, 5000)
    with pytest.raises(ValueError, match="8\\(p \\+ q \\+ 1\\)"):
        fit_tvarma(ar1_series, 2, 2, U_GRID, 32)
    with pytest.raises(ValueError):
        fit_tvarma(ar1_series, 6, 0, U_GRID, 512)
    with pytest.raises(ValueError):
        fit_tvarma(ar1_series, -1, 0, U_GRID, 512)


def test_model_validation():
    with pytest.raises(ValueError):
        flat_model(sigma2=0.0)
    with pytest.raises(ValueError):
        flat_model(u_grid=(0.6, 0.4))


def test_coefficients_are_interpolated():
    model = TvArmaModel(
        p=1, q=0, u_grid=[0.2, 0.8], ar_coeffs=[[-0.2], [-0.6]], ma_coeffs=np.zeros((2, 0)),
        sigma2=[1.0, 3.0], window=64,
    )

    ar, ma, sigma2 = coefficients_at(model, 0.5)

    assert ar == pytest.approx([-0.4])
    assert len(ma) == 0
    assert sigma2 == pytest.approx(2.0)

    with pytest.raises(ValueError):
        coefficients_at(model, 0.9)


def test_model_surface_of_flat_model():
    grid = build_grid(400, 40, 10)
    surface = model_surface(flat_model(), grid)

    assert surface.values.shape == grid.shape
    assert np.allclose(surface.values, 1.0)


def test_spectrum_integrates_to_variance():
    model = TvArmaModel(
        p=1, q=0, u_grid=[0.5], ar_coeffs=[[-0.5]], ma_coeffs=np.zeros((1, 0)), sigma2=[1.0], window=64
    )
    theta = np.linspace(-np.pi, np.pi, 4001)

    integral = trapezoid(tvarma_spectrum(model, 0.5, theta), theta)

    assert integral == pytest.approx(4 / 3, rel=0.02)
    assert isinstance(tvarma_spectrum(model, 0.5, 0.3), float)


def test_model_dict_survives_json():
    model = flat_model()
    restored = TvArmaModel.from_dict(json.loads(json.dumps(model.to_dict())))

    assert np.array_equal(restored.u_grid, model.u_grid)
    assert np.array_equal(restored.sigma2, model.sigma2)
    assert np.all(np.isnan(restored.objective))


def test_best_order_tie_break():
    table = pd.DataFrame(
        [(0, 0, 12.0), (1, 0, 10.0), (0, 1, 10.0), (2, 0, 11.0)], columns=["p", "q", "aic"]
    )
    assert best_order(table) == (0, 1)

    table = pd.DataFrame([(0, 2, 5.0), (1, 0, 5.0), (1, 1, 7.0)], columns=["p", "q", "aic"])
    assert best_order(table) == (1, 0)


def test_select_order_aic_prefers_ar_for_ar_data(ar1_series):
    assert select_order_aic(ar1_series, 1, 0, [0.5], 512) == (1, 0)


def test_default_u_grid_keeps_windows_inside():
    u = default_u_grid(800, 200, 9)

    assert len(u) == 9
    assert u[0] == pytest.approx(200 / 1600)
    assert u[-1] == pytest.approx(1 - 200 / 1600)
    assert default_u_grid(800, 200, 1).tolist() == [0.5]


def test_default_window_covers_the_order():
    assert default_window(100, 5, 5) == 88
    assert default_window(50, 5, 5) == 50
    assert default_window(800, 1, 0) >= 16


@pytest.mark.slow
def test_fit_recovers_a_time_varying_coefficient():
    spec = preset("tvar_whittle")
    N, window = 800, 200
    u_grid = default_u_grid(N, window, 9)
    truth = 0.3 + 0.2 * u_grid

    rmse = []

    for rep in range(50):
        model = fit_tvarma(simulate(spec, N, 4, rep), 1, 0, u_grid, window)
        rmse.append(np.sqrt(np.mean((model.ar_coeffs[:, 0] - truth) ** 2)))

    assert np.mean(rmse) < 0.15


@pytest.mark.slow
def test_select_order_aic_on_white_noise():
    u_grid = default_u_grid(800, 200, 3)

    orders = Counter(
        select_order_aic(TimeSeries(substream(12, rep).standard_normal(800)), 2, 2, u_grid, 200)
        for rep in range(20)
    )

    assert orders.most_common(1)[0][0] == (0, 0)
