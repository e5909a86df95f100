"""
Simulated locally stationary series and their reference spectra.
"""

import numpy as np

from ..config import MC_TRUTH_BANDWIDTH, MC_TRUTH_LENGTH, TRUTH_STREAM
from ..kernels import lag_window
from ..spectral import SpectralSurface, TimeSeries
from ..utils import substream
from . import linear, nonlinear
from .models import (
    KINDS,
    PRESETS,
    Coefficient,
    ModelSpec,
    check_stability,
    constant,
    cosine,
    polynomial,
    preset,
    sine,
)
from .nonlinear import markov_chain

# kinds with a closed-form spectrum
CLOSED_FORM = ("tv_ar1", "tv_ma1", "tv_arch1", "tv_ar_general")


class Simulators(linear.Simulators, nonlinear.Simulators):
    """

    Subclass for merging the recursions from the individual
    model families.

    """

    def __init__(self):
        return


def _path(spec, u, rng):

    handler = getattr(Simulators, spec.kind, None)

    if handler is None:
        raise ValueError(f"No simulator for model kind {spec.kind!r}.")

    return handler(spec, u, rng)


def simulate(spec, N, seed, *stream):
    """

    Simulate a series of length N.

    The recursion runs burn_in steps with coefficients frozen at
    u = 0, then steps i = 1..N at u = i/N; the burn-in is dropped.

    Args:
        spec (ModelSpec): model
        N (int): series length
        seed (int): master seed
        *stream (int): further stream address, e.g. a replicate index

    Returns:
        TimeSeries

    """

    check_stability(spec)

    if N < 1:
        raise ValueError(f"Series length must be positive, got {N}.")

    u = np.concatenate([np.zeros(spec.burn_in), np.arange(1, N + 1) / N])
    x = _path(spec, u, substream(seed, *stream))

    return TimeSeries(x[spec.burn_in :])


def true_spectrum(spec, u, theta):
    """

    Closed-form evolutionary spectrum.

    tv_ar1:        1 / (2 pi |1 - a(u) e^{i theta}|^2)
    tv_ma1:        |a0(u) + a1(u) e^{i theta}|^2 / (2 pi)
    tv_arch1:      a0(u) / (1 - a1(u)) / (2 pi), flat (white noise)
    tv_ar_general: sigma(u)^2 / (2 pi |1 + sum_j a_j(u) e^{i j theta}|^2)

    Args:
        spec (ModelSpec): model of one of the CLOSED_FORM kinds
        u (float): rescaled time
        theta (float or array-like): frequencies

    Returns:
        float for scalar theta, array otherwise

    """

    c = {k: float(f(u)) for k, f in spec.coefficients.items()}
    z = np.exp(1j * np.asarray(theta, dtype=float))

    if spec.kind == "tv_ar1":
        values = 1 / (2 * np.pi * np.abs(1 - c["a"] * z) ** 2)

    elif spec.kind == "tv_ma1":
        values = np.abs(c["a0"] + c["a1"] * z) ** 2 / (2 * np.pi)

    elif spec.kind == "tv_arch1":
        values = np.full(z.shape, c["a0"] / (1 - c["a1"]) / (2 * np.pi))

    elif spec.kind == "tv_ar_general":
        a = spec.ar_polynomial(u)[0]
        response = 1 + sum(a[j] * z ** (j + 1) for j in range(len(a)))
        values = c["sigma"] ** 2 / (2 * np.pi * np.abs(response) ** 2)

    else:
        raise ValueError(
            f"No closed-form spectrum for model kind {spec.kind!r}; "
            "use monte_carlo_spectrum instead."
        )

    if np.ndim(values) == 0:
        return float(values)

    return values


def monte_carlo_spectrum(
    spec, u_points, theta_points, length=MC_TRUTH_LENGTH, bandwidth=MC_TRUTH_BANDWIDTH, seed=0
):
    """

    Reference spectrum for models without a closed form.

    At each u the model is run with coefficients frozen at u for
    `length` steps; the spectrum of that stationary path is
    estimated with the tri-cube lag window at a large bandwidth.
    Autocovariances are not demeaned, matching the estimator they
    are compared with.

    Args:
        spec (ModelSpec): model
        u_points (array-like): rescaled times
        theta_points (array-like): frequencies
        length (int): frozen-u path length
        bandwidth (int): lag window bandwidth
        seed (int): seed; time point j uses stream (seed, TRUTH_STREAM, j)

    Returns:
        ndarray of shape (len(u_points), len(theta_points))

    """

    check_stability(spec)

    k = np.arange(bandwidth + 1)
    weights = lag_window(k / bandwidth)
    cosines = np.cos(np.outer(k[1:], np.asarray(theta_points, dtype=float)))

    rows = []

    for j, u in enumerate(np.asarray(u_points, dtype=float)):

        x = _path(spec, np.full(spec.burn_in + length, u), substream(seed, TRUTH_STREAM, j))
        x = x[spec.burn_in :]

        # circular-free autocovariance through a zero-padded FFT
        size = 1 << int(np.ceil(np.log2(2 * length)))
        spectrum = np.fft.rfft(x, size)
        r = np.fft.irfft(spectrum.real ** 2 + spectrum.imag ** 2, size)[: bandwidth + 1] / length

        w = r * weights
        rows.append((w[0] + 2 * w[1:] @ cosines) / (2 * np.pi))

    return np.array(rows)


def truth_surface(spec, grid, seed=0, **mc_kwargs):
    """

    Reference spectrum of a model on a grid: closed form where
    available, Monte-Carlo otherwise.

    Returns:
        SpectralSurface

    """

    if spec.kind in CLOSED_FORM:
        values = np.array([true_spectrum(spec, u, grid.theta_points) for u in grid.u_points])
    else:
        values = monte_carlo_spectrum(spec, grid.u_points, grid.theta_points, seed=seed, **mc_kwargs)

    return SpectralSurface(grid, values)
