"""
Simultaneous confidence regions (SCR) for the evolutionary spectrum.

The critical value comes either from a Gaussian bootstrap, which
recomputes the maximum relative deviation on i.i.d. standard normal
pseudo-samples, or from the Gumbel limit of the maximum deviation.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy.stats import gumbel_r

from .checks import GridMismatchError, check_alpha, check_denominator
from .config import DEFAULT_N_MC, EPS_FLOOR
from .grid import TimeFreqGrid
from .kernels import lag_window_sq_integral
from .spectral import SpectralSurface, TimeSeries, spectral_surface
from .utils import parallel_map, substream

FORMS = ("ratio", "exp")
SOURCES = ("bootstrap", "gumbel")

# the Gumbel limit is stated for the ratio band only
METHODS = ("bootstrap-ratio", "bootstrap-exp", "gumbel-ratio")


@dataclass(frozen=True, eq=False)
class BootstrapDistribution:
    """

    Sorted Monte-Carlo samples of the maximum squared relative
    deviation of pseudo-sample estimates around their mean.

    """

    samples: np.ndarray
    grid: TimeFreqGrid
    seed: int
    N_MC: int

    def __post_init__(self):

        samples = np.sort(np.asarray(self.samples, dtype=float))

        if len(samples) != self.N_MC:
            raise ValueError(f"Expected {self.N_MC} samples, got {len(samples)}.")

        if np.any(samples < 0):
            raise ValueError("Bootstrap samples must be nonnegative.")

        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    def quantile(self, q):
        """

        Right-continuous empirical quantile: the ceil(q * N_MC)-th
        order statistic, clipped to 1..N_MC.

        """

        # tolerance keeps e.g. (1 - 0.05) * 1000 at 950
        k = math.ceil(q * self.N_MC - 1e-9)
        k = min(max(k, 1), self.N_MC)

        return float(self.samples[k - 1])

    def p_value(self, statistic):
        """

        Add-one p-value (1 + #{samples >= statistic}) / (N_MC + 1).

        """

        count = self.N_MC - int(np.searchsorted(self.samples, statistic, side="left"))

        return (1 + count) / (self.N_MC + 1)


@dataclass(frozen=True, eq=False)
class SCR:
    """

    Lower and upper bands over a grid at level alpha.

    """

    grid: TimeFreqGrid
    lower: np.ndarray
    upper: np.ndarray
    gamma: float
    alpha: float
    method: str
    center: SpectralSurface

    def __post_init__(self):

        if self.method not in METHODS:
            raise ValueError(f"Unknown SCR method {self.method!r}; use one of {METHODS}.")

    def time_slice(self, u_index):
        """

        Bands along frequency at one grid time point.

        Args:
            u_index (int): index into grid.u_points

        Returns:
            DataFrame with columns theta, lower, center, upper

        """

        return pd.DataFrame(
            {
                "theta": self.grid.theta_points,
                "lower": self.lower[u_index],
                "center": self.center.values[u_index],
                "upper": self.upper[u_index],
            }
        )

    def frequency_slice(self, theta_index):
        """

        Bands along time at one grid frequency.

        """

        return pd.DataFrame(
            {
                "u": self.grid.u_points,
                "lower": self.lower[:, theta_index],
                "center": self.center.values[:, theta_index],
                "upper": self.upper[:, theta_index],
            }
        )

    def to_frame(self):

        df = self.center.to_frame()
        df["lower"] = self.lower.ravel()
        df["upper"] = self.upper.ravel()

        return df

    def to_dict(self):

        return {
            "method": self.method,
            "alpha": self.alpha,
            "gamma": self.gamma,
            "center": self.center.values.tolist(),
            "lower": self.lower.tolist(),
            "upper": self.upper.tolist(),
        }


def _pseudo_surface(N, grid, seed, m):

    eps = substream(seed, m).standard_normal(N)

    return spectral_surface(TimeSeries(eps), grid).values


def bootstrap_distribution(
    N, grid, N_MC=DEFAULT_N_MC, seed=0, eps=EPS_FLOOR, n_jobs=1, progress=False
):
    """

    Gaussian bootstrap of the maximum squared relative deviation.

    Replicate m draws N i.i.d. standard normals from substream
    (seed, m), estimates the spectrum on the grid, and contributes
    max |f_m - f_bar|^2 / f_bar^2 where f_bar is the pointwise mean
    over all replicates.

    Args:
        N (int): series length the grid was built for
        grid (TimeFreqGrid): inference grid
        N_MC (int): number of replicates, at least 100
        seed (int): master seed
        eps (float): relative floor on |f_bar|
        n_jobs (int): worker threads
        progress (bool): show a progress bar

    Returns:
        BootstrapDistribution

    """

    if N_MC < 100:
        raise ValueError(f"N_MC must be at least 100, got {N_MC}.")

    if grid.N != N:
        raise GridMismatchError(f"Grid was built for N={grid.N}, not N={N}.")

    surfaces = np.stack(
        parallel_map(
            lambda m: _pseudo_surface(N, grid, seed, m),
            range(1, N_MC + 1),
            n_jobs=n_jobs,
            progress=progress,
            desc="bootstrap",
        )
    )

    f_bar = surfaces.mean(axis=0)
    check_denominator(f_bar, eps, what="bootstrap mean surface")

    samples = np.max(((surfaces - f_bar) / f_bar) ** 2, axis=(1, 2))

    return BootstrapDistribution(samples=samples, grid=grid, seed=seed, N_MC=N_MC)


def critical_value(dist, alpha):
    """

    Bootstrap critical value gamma_{1-alpha}.

    Args:
        dist (BootstrapDistribution): bootstrap samples
        alpha (float): level in (0, 1)

    Returns:
        square root of the (1 - alpha) empirical quantile

    """

    check_alpha(alpha)

    return math.sqrt(dist.quantile(1 - alpha))


def build_scr(center, gamma, alpha, form="ratio", source="bootstrap"):
    """

    Bands around an estimate for a given critical value.

    Ratio form: [max(0, (1 - gamma) f), (1 + gamma) f].
    Exp form: [exp(-gamma) f, exp(gamma) f], which needs f > 0
    everywhere.

    Args:
        center (SpectralSurface): estimate
        gamma (float): critical value, nonnegative
        alpha (float): level the critical value belongs to
        form (str): "ratio" or "exp"
        source (str): "bootstrap" or "gumbel", recorded in the method label

    Returns:
        SCR

    """

    check_alpha(alpha)

    if not gamma >= 0:
        raise ValueError(f"Critical value gamma must be nonnegative, got {gamma}.")

    if source not in SOURCES:
        raise ValueError(f"Unknown critical value source {source!r}; use one of {SOURCES}.")

    if source == "gumbel" and form == "exp":
        raise ValueError("The Gumbel critical value only supports the ratio form.")

    f = center.values

    if form == "ratio":

        if gamma >= 1:
            warnings.warn(
                f"Critical value gamma={gamma:.3f} >= 1: the lower band is zero everywhere. "
                "The series may be too short for this (n, B_n) and grid."
            )

        lower = np.maximum(0.0, (1 - gamma) * f)
        upper = (1 + gamma) * f

    elif form == "exp":

        if np.any(f <= 0):
            raise ValueError(
                "The exp-form band needs a strictly positive estimate; use the ratio form."
            )

        lower = math.exp(-gamma) * f
        upper = math.exp(gamma) * f

    else:
        raise ValueError(f"Unknown band form {form!r}; use one of {FORMS}.")

    return SCR(
        grid=center.grid,
        lower=lower,
        upper=upper,
        gamma=float(gamma),
        alpha=float(alpha),
        method=f"{source}-{form}",
        center=center,
    )


def gumbel_location(alpha):
    """

    x with exp(-exp(-x/2)) = 1 - alpha, i.e. -2 log(-log(1 - alpha)).

    """

    check_alpha(alpha)

    return float(gumbel_r.ppf(1 - alpha, scale=2))


def gumbel_threshold(alpha, B_n, C_n):
    """

    Threshold T for the normalized maximum deviation:
    2 log B_n + 2 log C_n - log(pi log B_n + pi log C_n) + x.

    """

    if B_n < 3:
        raise ValueError(f"Gumbel asymptotics need B_n >= 3, got {B_n}.")

    if C_n < 2:
        raise ValueError(f"Gumbel asymptotics need C_n >= 2, got {C_n}.")

    log_B, log_C = math.log(B_n), math.log(C_n)

    return 2 * log_B + 2 * log_C - math.log(np.pi * log_B + np.pi * log_C) + gumbel_location(alpha)


def gumbel_critical_value(alpha, B_n, C_n, n):
    """

    Critical value for the relative deviation |f - f_n| / f from the
    Gumbel limit: gamma = sqrt(T (B_n / n) int a^2).

    Args:
        alpha (float): level in (0, 1)
        B_n (int): lag bandwidth
        C_n (int): number of grid time points
        n (int): window length

    Returns:
        float

    """

    T = gumbel_threshold(alpha, B_n, C_n)

    if T <= 0:
        raise ValueError(
            f"Gumbel threshold T={T:.4f} is not positive; the grid "
            f"(B_n={B_n}, C_n={C_n}) is too small for the asymptotics."
        )

    return math.sqrt(T * (B_n / n) * lag_window_sq_integral())


def max_relative_deviation(reference, center, eps=EPS_FLOOR):
    """

    max over the grid of |reference - center|^2 / center^2.

    Args:
        reference (SpectralSurface): surface compared against the center
        center (SpectralSurface): denominator surface
        eps (float): relative floor on |center|

    Returns:
        float

    """

    center.grid.check_same(reference.grid)
    check_denominator(center.values, eps)

    return float(np.max(((reference.values - center.values) / center.values) ** 2))


def scr_contains(scr, surface):
    """

    Check whether a surface lies inside the bands at every grid point.

    """

    scr.grid.check_same(surface.grid)

    return bool(np.all((scr.lower <= surface.values) & (surface.values <= scr.upper)))
