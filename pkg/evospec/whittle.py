"""
Time-varying ARMA models fitted by local Whittle likelihood.

A model is

    sum_{i=0}^p a_i(u) X_{t-i} = sigma(u) sum_{j=0}^q b_j(u) e_{t-j},
    a_0 = b_0 = 1,

with coefficients stored at the points of a time grid and linearly
interpolated in between. Its evolutionary spectrum is

    f(u, theta) = sigma^2(u)/(2 pi) |B_u(e^{i theta})|^2 / |A_u(e^{i theta})|^2.

Fits optimize over partial autocorrelations mapped through tanh, so
every decoded AR polynomial is causal and every MA polynomial is
invertible.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy.optimize import minimize

from .checks import check_finite, is_positive_int
from .config import WHITTLE_MAXITER, WHITTLE_RESTARTS, WHITTLE_TOL
from .kernels import tau
from .spectral import SpectralSurface, window_center
from .tuning import candidate_bounds
from .utils import parallel_map, substream

# |A(e^{i theta})| below this is treated as a unit root
AR_MODULUS_FLOOR = 1e-10

MAX_ORDER = 5


@dataclass(frozen=True, eq=False)
class TvArmaModel:
    """

    Time-varying ARMA(p, q) coefficients on a time grid.

    """

    p: int
    q: int
    u_grid: np.ndarray
    ar_coeffs: np.ndarray
    ma_coeffs: np.ndarray
    sigma2: np.ndarray
    window: int
    converged: np.ndarray = None
    objective: np.ndarray = None

    def __post_init__(self):

        u = np.atleast_1d(np.array(self.u_grid, dtype=float))
        m = len(u)

        ar = np.array(self.ar_coeffs, dtype=float).reshape(m, self.p)
        ma = np.array(self.ma_coeffs, dtype=float).reshape(m, self.q)
        sigma2 = np.atleast_1d(np.array(self.sigma2, dtype=float))

        if np.any(np.diff(u) <= 0) or np.any(u <= 0) or np.any(u >= 1):
            raise ValueError("Model time grid must be strictly increasing inside (0, 1).")

        if sigma2.shape != (m,) or np.any(~(sigma2 > 0)):
            raise ValueError("Innovation variances must be positive, one per time point.")

        converged = (
            np.ones(m, dtype=bool) if self.converged is None else np.array(self.converged, dtype=bool)
        )
        objective = (
            np.full(m, np.nan) if self.objective is None else np.array(self.objective, dtype=float)
        )

        for name, value in (
            ("u_grid", u),
            ("ar_coeffs", ar),
            ("ma_coeffs", ma),
            ("sigma2", sigma2),
            ("converged", converged),
            ("objective", objective),
        ):
            object.__setattr__(self, name, value)

    def is_causal_invertible(self):
        """

        Check that at every time point all roots of the AR and MA
        polynomials lie outside the unit circle.

        """

        for a, b in zip(self.ar_coeffs, self.ma_coeffs):
            for coeffs in (a, b):
                if len(coeffs) and np.any(np.abs(np.roots(np.r_[1.0, coeffs][::-1])) <= 1):
                    return False

        return True

    def to_dict(self):

        return {
            "p": self.p,
            "q": self.q,
            "u_grid": self.u_grid.tolist(),
            "ar_coeffs": self.ar_coeffs.tolist(),
            "ma_coeffs": self.ma_coeffs.tolist(),
            "sigma2": self.sigma2.tolist(),
            "window": self.window,
            "converged": self.converged.tolist(),
            "objective": [None if math.isnan(x) else x for x in self.objective.tolist()],
        }

    @classmethod
    def from_dict(cls, d):

        objective = d.get("objective")
        if objective is not None:
            objective = [np.nan if x is None else x for x in objective]

        return cls(
            p=int(d["p"]),
            q=int(d["q"]),
            u_grid=d["u_grid"],
            ar_coeffs=d["ar_coeffs"],
            ma_coeffs=d["ma_coeffs"],
            sigma2=d["sigma2"],
            window=int(d["window"]),
            converged=d.get("converged"),
            objective=objective,
        )


def pacf_to_coeffs(pacf):
    """

    Durbin-Levinson map from partial autocorrelations in (-1, 1) to
    coefficients phi of a causal 1 - sum phi_j z^j.

    """

    pacf = np.asarray(pacf, dtype=float)
    phi = pacf.copy()

    for j in range(1, len(pacf)):
        r = pacf[j]
        phi[:j] = phi[:j] - r * phi[j - 1 :: -1][:j]

    return phi


def coeffs_to_pacf(phi):
    """

    Inverse of pacf_to_coeffs (step-down recursion).

    """

    phi = np.array(phi, dtype=float)
    pacf = np.empty_like(phi)

    for j in range(len(phi) - 1, -1, -1):
        r = phi[j]
        pacf[j] = r
        if j:
            if abs(r) >= 1:
                raise ValueError("Coefficients are not causal.")
            phi[:j] = (phi[:j] + r * phi[j - 1 :: -1][:j]) / (1 - r * r)

    return pacf


def decode_params(params, p, q):
    """

    Unconstrained vector -> (AR, MA) coefficients in the a_0 = b_0 = 1
    convention.

    """

    params = np.asarray(params, dtype=float)

    ar = -pacf_to_coeffs(np.tanh(params[:p]))
    ma = -pacf_to_coeffs(np.tanh(params[p : p + q]))

    return ar, ma


def encode_params(ar, ma):
    """

    (AR, MA) coefficients -> unconstrained vector; inverse of
    decode_params for causal and invertible polynomials.

    """

    ar_pacf = coeffs_to_pacf(-np.asarray(ar, dtype=float))
    ma_pacf = coeffs_to_pacf(-np.asarray(ma, dtype=float))

    return np.arctanh(np.r_[ar_pacf, ma_pacf])


def _transfer_power(coeffs, theta):
    # |1 + sum_k c_k e^{i k theta}|^2
    theta = np.asarray(theta, dtype=float)
    k = np.arange(1, len(coeffs) + 1)
    response = 1 + np.exp(1j * np.multiply.outer(theta, k)) @ np.asarray(coeffs, dtype=float)

    return response.real ** 2 + response.imag ** 2


def unit_spectrum(ar, ma, theta):
    """

    Spectrum of the ARMA model with unit innovation variance.

    """

    ar_power = _transfer_power(ar, theta)

    if np.any(ar_power < AR_MODULUS_FLOOR ** 2):
        raise ValueError("AR polynomial is numerically zero on the unit circle (unit root).")

    return _transfer_power(ma, theta) / (2 * np.pi * ar_power)


def fourier_frequencies(window):
    """

    Frequencies 2 pi k / window for k = 1..(window - 1) // 2.

    """

    return 2 * np.pi * np.arange(1, (window - 1) // 2 + 1) / window


def fourier_periodogram(series, u, window):
    """

    Tapered local periodogram at the Fourier frequencies of a window
    centered at floor(uN).

    Args:
        series (TimeSeries): observations
        u (float): rescaled time in (0, 1)
        window (int): window length

    Returns:
        (frequencies, values)

    """

    c = window_center(u, series.N)
    i = c - window // 2 + np.arange(window)

    y = tau((i - c) / window) * series.take(i)
    K = (window - 1) // 2

    J = np.fft.fft(y)[1 : K + 1]

    return fourier_frequencies(window), (J.real ** 2 + J.imag ** 2) / (2 * np.pi * window)


def local_whittle_objective(params, periodogram, p, q, frequencies=None, sigma2=None):
    """

    Local Whittle objective sum_k [log f(theta_k) + I(theta_k) / f(theta_k)].

    Args:
        params (array-like): unconstrained AR then MA parameters
        periodogram (array-like): I at the Fourier frequencies
        p (int): AR order
        q (int): MA order
        frequencies (array-like): theta_k; defaults to 2 pi k / (2K + 1)
                                  for K periodogram values
        sigma2 (float): innovation variance; profiled out when None

    Returns:
        float, inf at infeasible points

    """

    I = np.asarray(periodogram, dtype=float)

    if frequencies is None:
        frequencies = fourier_frequencies(2 * len(I) + 1)

    try:
        ar, ma = decode_params(params, p, q)
        shape = unit_spectrum(ar, ma, frequencies)
    except (ValueError, FloatingPointError):
        return np.inf

    if sigma2 is None:
        sigma2 = np.mean(I / shape)

    f = sigma2 * shape
    value = float(np.sum(np.log(f) + I / f))

    return value if math.isfinite(value) else np.inf


def profiled_sigma2(params, periodogram, p, q, frequencies=None):
    """

    Minimizer of the objective over sigma^2 at fixed shape:
    mean of I / f_unit.

    """

    I = np.asarray(periodogram, dtype=float)

    if frequencies is None:
        frequencies = fourier_frequencies(2 * len(I) + 1)

    ar, ma = decode_params(params, p, q)

    return float(np.mean(I / unit_spectrum(ar, ma, frequencies)))


def _fit_local(series, u, u_index, p, q, window, restarts, seed, maxiter, tol):

    frequencies, I = fourier_periodogram(series, u, window)

    def objective(x):
        return local_whittle_objective(x, I, p, q, frequencies=frequencies)

    if p + q == 0:
        x = np.zeros(0)
        return x, objective(x), True

    best_x, best_value, converged = None, np.inf, False

    for r in range(restarts):

        if r == 0:
            x0 = np.zeros(p + q)
        else:
            x0 = substream(seed, u_index, r).normal(size=p + q)

        if not math.isfinite(objective(x0)):
            continue

        result = minimize(
            objective,
            x0,
            method="Nelder-Mead",
            options={"maxiter": maxiter, "xatol": tol, "fatol": tol},
        )

        if math.isfinite(result.fun) and result.fun < best_value:
            best_x, best_value = result.x, float(result.fun)

        converged = converged or bool(result.success)

    if best_x is None:
        raise ValueError(f"Every Whittle restart was infeasible at u={u:.4f}.")

    return best_x, best_value, converged


def default_u_grid(N, window, points):
    """

    Equally spaced fit times from window/2N to 1 - window/2N.

    """

    if points < 1:
        raise ValueError(f"Need at least one fit time point, got {points}.")

    half = window / (2 * N)

    if points == 1:
        return np.array([0.5])

    return np.linspace(half, 1 - half, points)


def default_window(N, p, q):
    """

    Local window for a tvARMA(p, q) fit when none is given: the upper
    MV window bound, at least 8(p + q + 1), at most N.

    """

    return min(N, max(candidate_bounds(N)[1], 8 * (p + q + 1)))


def fit_tvarma(
    series,
    p,
    q,
    u_grid,
    window,
    restarts=WHITTLE_RESTARTS,
    seed=0,
    maxiter=WHITTLE_MAXITER,
    tol=WHITTLE_TOL,
    n_jobs=1,
):
    """

    Fit a time-varying ARMA(p, q) model by local Whittle likelihood.

    At each time point the tapered periodogram of the surrounding
    window is matched by Nelder-Mead from `restarts` starting points
    (zeros first, then seeded normal draws); sigma^2 is profiled out.

    Args:
        series (TimeSeries): observations
        p (int): AR order
        q (int): MA order
        u_grid (array-like): time points in (0, 1)
        window (int): local window length, between 8(p + q + 1) and N
        restarts (int): starting points per time point
        seed (int): seed for the random restarts
        maxiter (int): Nelder-Mead iteration cap per restart
        tol (float): Nelder-Mead tolerance on parameters and objective
        n_jobs (int): worker threads over time points

    Returns:
        TvArmaModel

    """

    for name, value in (("p", p), ("q", q)):
        if not (value == 0 or is_positive_int(value)) or value > MAX_ORDER:
            raise ValueError(f"Order {name} must be an integer in 0..{MAX_ORDER}, got {value}.")

    if not is_positive_int(window) or window > series.N:
        raise ValueError(f"Window must be a positive integer at most N={series.N}, got {window}.")

    if window < 8 * (p + q + 1):
        raise ValueError(f"Window {window} is shorter than 8(p + q + 1) = {8 * (p + q + 1)}.")

    u_grid = np.atleast_1d(np.asarray(u_grid, dtype=float))

    fits = parallel_map(
        lambda item: _fit_local(series, item[1], item[0], p, q, window, restarts, seed, maxiter, tol),
        list(enumerate(u_grid)),
        n_jobs=n_jobs,
    )

    ar_coeffs, ma_coeffs, sigma2 = [], [], []

    for (x, _, _), u in zip(fits, u_grid):

        frequencies, I = fourier_periodogram(series, u, window)
        ar, ma = decode_params(x, p, q)

        ar_coeffs.append(ar)
        ma_coeffs.append(ma)
        sigma2.append(profiled_sigma2(x, I, p, q, frequencies=frequencies))

    converged = np.array([fit[2] for fit in fits])

    if not np.all(converged):
        warnings.warn(
            f"Whittle optimizer did not converge at {int(np.sum(~converged))} of "
            f"{len(u_grid)} time points (ARMA({p}, {q}))."
        )

    return TvArmaModel(
        p=p,
        q=q,
        u_grid=u_grid,
        ar_coeffs=np.array(ar_coeffs).reshape(len(u_grid), p),
        ma_coeffs=np.array(ma_coeffs).reshape(len(u_grid), q),
        sigma2=np.array(sigma2),
        window=window,
        converged=converged,
        objective=np.array([fit[1] for fit in fits]),
    )


def coefficients_at(model, u):
    """

    Linearly interpolated (ar, ma, sigma2) at time u.

    Args:
        model (TvArmaModel): model
        u (float): time inside [u_grid[0], u_grid[-1]]

    """

    check_finite("u", u)

    grid = model.u_grid

    if u < grid[0] - 1e-12 or u > grid[-1] + 1e-12:
        raise ValueError(
            f"u={u} lies outside the model time range [{grid[0]}, {grid[-1]}]."
        )

    def interp(column):
        return float(np.interp(u, grid, column))

    ar = np.array([interp(model.ar_coeffs[:, i]) for i in range(model.p)])
    ma = np.array([interp(model.ma_coeffs[:, j]) for j in range(model.q)])

    return ar, ma, interp(model.sigma2)


def tvarma_spectrum(model, u, theta):
    """

    Model spectrum f(u, theta).

    Args:
        model (TvArmaModel): model
        u (float): time inside the model time range
        theta (float or array-like): frequencies

    Returns:
        float for scalar theta, array otherwise

    """

    ar, ma, sigma2 = coefficients_at(model, u)
    values = sigma2 * unit_spectrum(ar, ma, np.atleast_1d(theta))

    if np.ndim(theta) == 0:
        return float(values[0])

    return values


def model_surface(model, grid):
    """

    Model spectrum on every point of a grid.

    Args:
        model (TvArmaModel): model covering the grid's time range
        grid (TimeFreqGrid): grid

    Returns:
        SpectralSurface

    """

    values = np.array([tvarma_spectrum(model, u, grid.theta_points) for u in grid.u_points])

    return SpectralSurface(grid, values)


def aic_table(series, p_max, q_max, u_grid, window, n_jobs=1, **fit_kwargs):
    """

    AIC of every ARMA(p, q) with p <= p_max, q <= q_max:
    sum over the time grid of 2 L_min(u) + 2 (p + q + 1).

    Returns:
        DataFrame with columns p, q, aic

    """

    if p_max > MAX_ORDER or q_max > MAX_ORDER:
        raise ValueError(f"Orders above {MAX_ORDER} are not supported.")

    rows = []

    for p in range(p_max + 1):
        for q in range(q_max + 1):

            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                model = fit_tvarma(series, p, q, u_grid, window, n_jobs=n_jobs, **fit_kwargs)

            aic = float(np.sum(2 * model.objective + 2 * (p + q + 1)))
            rows.append((p, q, aic))

    return pd.DataFrame(rows, columns=["p", "q", "aic"])


def select_order_aic(series, p_max, q_max, u_grid, window, n_jobs=1, **fit_kwargs):
    """

    Orders (p, q) with the smallest AIC; ties go to the smaller
    total order, then the smaller p.

    """

    return best_order(aic_table(series, p_max, q_max, u_grid, window, n_jobs=n_jobs, **fit_kwargs))


def best_order(table):

    table = table.assign(order=table["p"] + table["q"]).sort_values(["aic", "order", "p"])
    best = table.iloc[0]

    return int(best["p"]), int(best["q"])
