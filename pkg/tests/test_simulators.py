import json

import numpy as np
import pytest

from evospec.grid import build_grid
from evospec.simulators import (
    PRESETS,
    Coefficient,
    ModelSpec,
    Simulators,
    check_stability,
    constant,
    cosine,
    markov_chain,
    monte_carlo_spectrum,
    polynomial,
    preset,
    simulate,
    true_spectrum,
    truth_surface,
)
from evospec.utils import substream


def test_coefficient_forms():
    u = np.array([0.0, 0.25, 0.5])

    assert np.allclose(constant(2.0)(u), 2.0)
    assert np.allclose(polynomial(1.0, 2.0)(u), [1.0, 1.5, 2.0])
    assert np.allclose(cosine(0.3)(u), [0.3, 0.0, -0.3])
    assert np.allclose(Coefficient("sine", {"amplitude": 1.0, "frequency": 0.5})(u), np.sin(np.pi * u))

    with pytest.raises(ValueError):
        Coefficient("spline", {})


def test_model_spec_validation():
    with pytest.raises(ValueError, match="Unknown model kind"):
        ModelSpec("tv_garch", {})
    with pytest.raises(ValueError, match="missing"):
        ModelSpec("tv_arch1", {"a0": constant(0.5)})
    with pytest.raises(ValueError):
        ModelSpec("tv_ar1", {"a": constant(0.5)}, burn_in=-1)
    with pytest.raises(ValueError, match="Unknown preset"):
        preset("garch")


@pytest.mark.parametrize(
    "spec, condition",
    [
        (ModelSpec("tv_ar1", {"a": constant(1.0)}), "sup \\|a\\(u\\)\\|"),
        (ModelSpec("tv_arch1", {"a0": constant(0.0), "a1": constant(0.5)}), "a0\\(u\\) > 0"),
        (ModelSpec("tv_arch1", {"a0": constant(0.5), "a1": constant(-0.1)}), "a1\\(u\\) >= 0"),
        (ModelSpec("tv_arch1", {"a0": constant(0.5), "a1": constant(0.6)}), "a0\\(u\\) \\+ a1\\(u\\)"),
        (ModelSpec("tv_threshold_ar", {"a": constant(0.6), "b": constant(0.5)}), "\\|b\\(u\\)\\|"),
        (ModelSpec("tv_bilinear", {"b": constant(0.8), "c": constant(0.7)}), "c\\(u\\)\\^2"),
        (
            ModelSpec(
                "tv_markov_switch",
                {"a0": constant(0), "a1": constant(1), "b": constant(0.5)},
                transition=[[0.9, 0.2], [0.5, 0.5]],
            ),
            "sum to 1",
        ),
        (ModelSpec("tv_ar_general", {"a1": constant(-1.2), "sigma": constant(1.0)}), "causal"),
    ],
)
def test_stability_conditions(spec, condition):
    with pytest.raises(ValueError, match=condition):
        simulate(spec, 100, 0)


@pytest.mark.parametrize("name", PRESETS)
def test_presets_are_stable(name):
    check_stability(preset(name, 0.4))
    assert len(simulate(preset(name, 0.4), 300, 0)) == 300


def test_simulate_is_deterministic():
    spec = preset("tvar1")

    a = simulate(spec, 500, 7, 3)
    b = simulate(spec, 500, 7, 3)
    c = simulate(spec, 500, 7, 4)

    assert np.array_equal(a.values, b.values)
    assert not np.array_equal(a.values, c.values)


def test_simulate_rejects_empty_series():
    with pytest.raises(ValueError):
        simulate(preset("tvar1"), 0, 0)


def test_tvar1_means_are_centered():
    means = [simulate(preset("tvar1"), 500, 0, rep).values.mean() for rep in range(50)]
    assert abs(np.mean(means)) < 0.05


def test_tvarch1_variance_in_the_middle():
    variances = [simulate(preset("tvarch1"), 1000, 1, rep).values[375:625].var() for rep in range(20)]
    assert np.mean(variances) == pytest.approx(1.0, abs=0.15)


def test_ar_general_without_lags_is_scaled_noise():
    spec = ModelSpec("tv_ar_general", {"sigma": constant(2.0)})
    assert simulate(spec, 20000, 2).values.var() == pytest.approx(4.0, rel=0.05)


def test_recursions_return_full_paths():
    rng = substream(0)
    u = np.linspace(0, 1, 50)

    for kind in ("tv_ar1", "tv_ma1"):
        spec = preset("tvar1") if kind == "tv_ar1" else preset("tvma1", 0.2)
        assert len(getattr(Simulators, kind)(spec, u, rng)) == 50


def test_markov_chain_stationary_share():
    states = markov_chain([[0.9, 0.1], [0.5, 0.5]], 100000, substream(3))

    assert set(np.unique(states)) <= {0, 1}
    assert states.mean() == pytest.approx(1 / 6, abs=0.02)


def test_arch_paths_stay_finite():
    assert np.all(np.isfinite(simulate(preset("tvarch1"), 100000, 4).values))


@pytest.mark.slow
def test_arch_paths_stay_finite_long():
    assert np.all(np.isfinite(simulate(preset("tvarch1"), 1000000, 5).values))


def test_true_spectrum_values():
    assert true_spectrum(preset("tvar1"), 0.0, 0.0) == pytest.approx(1 / (2 * np.pi * 0.49))
    assert true_spectrum(preset("tvar_whittle"), 0.0, 0.0) == pytest.approx(1 / (2 * np.pi * 1.69))
    assert true_spectrum(preset("tvarch1"), 0.0, 1.0) == pytest.approx(0.7 / (2 * np.pi))
    assert true_spectrum(preset("tvma1", 0.0), 0.0, 0.5) == pytest.approx(1.6 ** 2 / (2 * np.pi))

    values = true_spectrum(preset("tvar1"), 0.3, np.linspace(0, np.pi, 5))
    assert values.shape == (5,)


def test_true_spectrum_needs_closed_form():
    with pytest.raises(ValueError, match="monte_carlo_spectrum"):
        true_spectrum(preset("bilinear"), 0.5, 0.0)


def test_monte_carlo_matches_closed_form():
    spec = preset("tvar1")
    u, theta = [0.1, 0.5], np.linspace(0, np.pi, 5)

    approx = monte_carlo_spectrum(spec, u, theta, length=100000, bandwidth=100)
    exact = np.array([true_spectrum(spec, v, theta) for v in u])

    assert np.all(np.abs(approx / exact - 1) < 0.15)


def test_truth_surface():
    grid = build_grid(400, 40, 10)

    closed = truth_surface(preset("tvar1"), grid)
    assert np.allclose(closed.values[0], true_spectrum(preset("tvar1"), grid.u_points[0], grid.theta_points))

    simulated = truth_surface(preset("threshold_ar"), grid, length=5000, bandwidth=50)
    assert simulated.values.shape == grid.shape
    assert np.all(simulated.values > 0)


def test_spec_dict_round_trip_simulates_identically():
    spec = preset("markov_switch")
    restored = ModelSpec.from_dict(json.loads(json.dumps(spec.to_dict())))

    assert np.array_equal(simulate(spec, 300, 9).values, simulate(restored, 300, 9).values)
