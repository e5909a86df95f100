"""
Short-time Fourier transform, local periodogram, local autocovariance
and the lag-window estimator of the evolutionary spectral density.

Observations are indexed i = 1..N with X_i = 0 outside that range, so
every operation is defined for any u in (0, 1).
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
import pandas as pd
from scipy.fft import dct

from .checks import GridMismatchError, check_finite, check_window, is_positive_int
from .grid import TimeFreqGrid
from .kernels import lag_window, lag_window_sq_integral, taper_fourth_integral, tau


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """

    An observed or simulated real-valued series.

    """

    values: np.ndarray
    demeaned: bool = False
    demean_bandwidth: Optional[int] = None

    def __post_init__(self):

        values = np.array(self.values, dtype=float)

        if values.ndim != 1 or len(values) == 0:
            raise ValueError("A time series needs a one-dimensional array of at least one value.")

        if not np.all(np.isfinite(values)):
            bad = int(np.flatnonzero(~np.isfinite(values))[0]) + 1
            raise ValueError(f"Observation {bad} is not finite.")

        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def N(self):
        return len(self.values)

    def __len__(self):
        return len(self.values)

    def scaled(self, c):
        return TimeSeries(c * self.values, self.demeaned, self.demean_bandwidth)

    def take(self, indices):
        """

        Observations X_i at 1-based indices, zero outside 1..N.

        Args:
            indices (ndarray of int): 1-based indices, any shape

        """

        indices = np.asarray(indices)
        inside = (indices >= 1) & (indices <= self.N)

        out = np.zeros(indices.shape)
        out[inside] = self.values[indices[inside] - 1]

        return out


@dataclass(frozen=True, eq=False)
class SpectralSurface:
    """

    Values of an estimate or a model spectrum on a TimeFreqGrid,
    indexed (u-index, theta-index).

    """

    grid: TimeFreqGrid
    values: np.ndarray

    def __post_init__(self):

        values = np.array(self.values, dtype=float)

        if values.shape != self.grid.shape:
            raise GridMismatchError(
                f"Surface values have shape {values.shape}, grid has shape {self.grid.shape}."
            )

        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def n(self):
        return self.grid.n

    @property
    def B_n(self):
        return self.grid.B_n

    def with_values(self, values):
        return SpectralSurface(self.grid, values)

    def to_frame(self):
        """

        Long-format table with columns (u, theta, value).

        """

        u, theta = np.meshgrid(self.grid.u_points, self.grid.theta_points, indexing="ij")

        return pd.DataFrame(
            {"u": u.ravel(), "theta": theta.ravel(), "value": self.values.ravel()}
        )

    def to_dict(self):
        return {"grid": self.grid.to_dict(), "values": self.values.tolist()}

    @classmethod
    def from_dict(cls, d):
        return cls(TimeFreqGrid.from_dict(d["grid"]), np.array(d["values"], dtype=float))


def window_center(u, N):
    """

    floor(u*N), corrected so that u = k/N maps to index k exactly.

    Args:
        u (float): rescaled time
        N (int): series length

    """

    c = math.floor(u * N)

    if (c + 1) / N <= u:
        c += 1
    elif c / N > u:
        c -= 1

    return c


def _offsets(n):

    h = math.ceil(n / 2)

    return np.arange(-h, h + 1)


def _check_point(series, u, n):

    check_finite("u", u)

    if not 0 < u < 1:
        raise ValueError(f"u must lie in (0, 1), got {u}.")

    check_window(series.N, n)


def _tapered_segment(series, u, n):
    """

    Tapered observations tau((i - floor(uN))/n) X_i over the window,
    with their absolute indices.

    """

    d = _offsets(n)
    i = window_center(u, series.N) + d

    return tau(d / n) * series.take(i), i


def stft(series, u, theta, n):
    """

    Short-time Fourier transform J_n(u, theta).

    Args:
        series (TimeSeries): observations
        u (float): rescaled time in (0, 1)
        theta (float): frequency
        n (int): window length, at most N

    Returns:
        complex

    """

    _check_point(series, u, n)
    check_finite("theta", theta)

    y, i = _tapered_segment(series, u, n)

    return complex(np.sum(y * np.exp(1j * theta * i)))


def local_periodogram(series, u, theta, n):
    """

    Local periodogram |J_n(u, theta)|^2 / (2 pi n).

    """

    J = stft(series, u, theta, n)

    return (J.real ** 2 + J.imag ** 2) / (2 * np.pi * n)


def _lagged_product(y, k):

    k = abs(k)

    if k >= len(y):
        return 0.0

    return float(np.dot(y[: len(y) - k], y[k:]))


def local_autocov(series, u, k, n):
    """

    Local autocovariance r(u, k) at integer lag k, |k| <= n.

    Args:
        series (TimeSeries): observations
        u (float): rescaled time in (0, 1)
        k (int): lag
        n (int): window length

    Returns:
        float

    """

    _check_point(series, u, n)

    if abs(k) > n:
        raise ValueError(f"Lag |k|={abs(k)} exceeds the window length n={n}.")

    y, _ = _tapered_segment(series, u, n)

    return _lagged_product(y, k) / n


def spectral_estimate(series, u, theta, n, B_n):
    """

    Lag-window estimate f_n(u, theta) by the direct double sum.

    This is the reference path: each r(u, k) is recomputed for
    k = -B_n..B_n. Values may be negative.

    Args:
        series (TimeSeries): observations
        u (float): rescaled time in (0, 1)
        theta (float): frequency (any real; the estimate is 2 pi periodic)
        n (int): window length
        B_n (int): lag bandwidth, smaller than n

    Returns:
        float

    """

    check_window(series.N, n, B_n)
    check_finite("theta", theta)

    total = 0.0
    for k in range(-B_n, B_n + 1):
        total += local_autocov(series, u, k, n) * lag_window(k / B_n) * math.cos(k * theta)

    return total / (2 * np.pi)


def weighted_autocov(series, u_points, n, B_n):
    """

    Lag-windowed local autocovariances r(u_j, k) a(k/B_n) for
    k = 0..B_n at every time point.

    Args:
        series (TimeSeries): observations
        u_points (array-like): rescaled times in (0, 1)
        n (int): window length
        B_n (int): lag bandwidth

    Returns:
        ndarray of shape (len(u_points), B_n + 1)

    """

    check_window(series.N, n, B_n)

    u_points = np.asarray(u_points, dtype=float)
    for u in u_points:
        _check_point(series, u, n)

    d = _offsets(n)
    centers = np.array([window_center(u, series.N) for u in u_points])

    Y = tau(d / n)[None, :] * series.take(centers[:, None] + d[None, :])
    L = Y.shape[1]

    R = np.empty((len(u_points), B_n + 1))
    for k in range(B_n + 1):
        R[:, k] = np.sum(Y[:, : L - k] * Y[:, k:], axis=1) / n

    return R * lag_window(np.arange(B_n + 1) / B_n)[None, :]


def spectral_surface(series, grid, method="transform"):
    """

    Evaluate the estimator on every point of a grid.

    The transform path computes the weighted autocovariances once
    per time point and gets all frequencies i*pi/B_n from one
    type-I discrete cosine transform over the lags (the k = B_n
    term vanishes because a(1) = 0). The direct path calls
    spectral_estimate point by point.

    Args:
        series (TimeSeries): observations
        grid (TimeFreqGrid): grid built for this series length
        method (str): "transform" or "direct"

    Returns:
        SpectralSurface

    """

    if grid.N != series.N:
        raise GridMismatchError(f"Grid was built for N={grid.N}, series has N={series.N}.")

    if method == "transform":

        W = weighted_autocov(series, grid.u_points, grid.n, grid.B_n)
        values = dct(W, type=1, axis=1) / (2 * np.pi)

    elif method == "direct":

        values = np.array(
            [
                [spectral_estimate(series, u, theta, grid.n, grid.B_n) for theta in grid.theta_points]
                for u in grid.u_points
            ]
        )

    else:
        raise ValueError(f"Unknown method {method!r}; use 'transform' or 'direct'.")

    return SpectralSurface(grid, values)


def evaluate_surface(series, u_points, theta_points, n, B_n):
    """

    Evaluate the estimator on arbitrary time and frequency points.

    Args:
        series (TimeSeries): observations
        u_points (array-like): rescaled times in (0, 1)
        theta_points (array-like): frequencies
        n (int): window length
        B_n (int): lag bandwidth

    Returns:
        ndarray of shape (len(u_points), len(theta_points))

    """

    W = weighted_autocov(series, u_points, n, B_n)

    k = np.arange(1, B_n + 1)
    cosines = np.cos(np.outer(k, np.asarray(theta_points, dtype=float)))

    return (W[:, :1] + 2 * W[:, 1:] @ cosines) / (2 * np.pi)


def asymptotic_variance(f, theta, n, B_n):
    """

    Large-sample variance of the lag-window estimate,
    (B_n / n) (1 + eta(2 theta)) f^2 int a^2 int tau^4, where eta(2 theta)
    is one at theta = 0 and theta = pi (mod 2 pi) and zero elsewhere.

    Args:
        f (float or array-like): spectral density at the points
        theta (float or array-like): frequencies, broadcast against f
        n (int): window length
        B_n (int): lag bandwidth

    Returns:
        ndarray, or a float for scalar input

    """

    f = np.asarray(f, dtype=float)
    theta = np.asarray(theta, dtype=float)

    # distance of theta to the nearest multiple of pi
    off = np.abs(theta - np.pi * np.round(theta / np.pi))
    doubling = np.where(off < 1e-12, 2.0, 1.0)

    values = (B_n / n) * doubling * f ** 2 * lag_window_sq_integral() * taper_fourth_integral()

    if values.ndim == 0:
        return float(values)

    return values


def normalized_stft_pair(series, u, j, n, f_ref):
    """

    Cosine and sine parts of the tapered transform at Fourier
    frequency 2 pi j / n, normalized by sqrt(pi n f_ref).

    For a series with spectral density f_ref near u, both parts
    are approximately independent standard normals, and pairs at
    distinct j are approximately independent.

    Args:
        series (TimeSeries): observations
        u (float): rescaled time in (0, 1)
        j (int): frequency index, 1 <= j <= (n - 1) // 2
        n (int): window length
        f_ref (float): reference spectral level, positive

    Returns:
        (float, float)

    """

    _check_point(series, u, n)

    if not is_positive_int(j) or j > (n - 1) // 2:
        raise ValueError(f"Frequency index j must be in 1..{(n - 1) // 2}, got {j}.")

    if not f_ref > 0:
        raise ValueError(f"Reference spectrum f_ref must be positive, got {f_ref}.")

    y, i = _tapered_segment(series, u, n)
    phase = 2 * np.pi * j * i / n
    scale = math.sqrt(np.pi * n * f_ref)

    return float(np.sum(y * np.cos(phase)) / scale), float(np.sum(y * np.sin(phase)) / scale)


def remove_local_mean(series, bandwidth):
    """

    Subtract a kernel-smoothed local mean.

    The local mean at i is the Nadaraya-Watson average with
    weights tau((j - i)/bandwidth), renormalized over the
    observations actually available near the boundaries.

    Args:
        series (TimeSeries): observations
        bandwidth (int): smoothing window, smaller than N

    Returns:
        TimeSeries flagged as demeaned

    """

    if not is_positive_int(bandwidth):
        raise ValueError(f"Bandwidth must be a positive integer, got {bandwidth}.")

    if bandwidth >= series.N:
        raise ValueError(f"Bandwidth {bandwidth} must be smaller than N={series.N}.")

    d = _offsets(bandwidth)
    h = len(d) // 2
    w = tau(d / bandwidth)

    N = series.N
    numerator = np.convolve(series.values, w)[h : h + N]
    denominator = np.convolve(np.ones(N), w)[h : h + N]

    return TimeSeries(
        series.values - numerator / denominator,
        demeaned=True,
        demean_bandwidth=bandwidth,
    )
