"""
Hypothesis tests built on the simultaneous confidence region.

Under each null the spectrum is re-estimated with a structural
constraint (constant in frequency, constant in time, separable, or a
fitted parametric model). The null surface converges faster than
the unconstrained estimate, so the null is rejected when it does not
fit inside the bootstrap SCR.
"""

from dataclasses import dataclass, field
from typing import Any, Dict

import numpy as np
from scipy.integrate import trapezoid

from .checks import DegenerateSpectrumError, check_alpha
from .config import DEFAULT_N_MC, EPS_FLOOR
from .grid import build_grid
from .scr import bootstrap_distribution, critical_value, max_relative_deviation
from .spectral import SpectralSurface, spectral_surface


@dataclass(frozen=True, eq=False)
class TestResult:
    """

    Outcome of an SCR-based test.

    """

    __test__ = False

    statistic: float
    p_value: float
    gamma_alpha: float
    reject: bool
    null_surface: SpectralSurface
    surface: SpectralSurface
    config: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self):

        return {
            "statistic": self.statistic,
            "p_value": self.p_value,
            "significance": significance_code(self.p_value),
            "gamma_alpha": self.gamma_alpha,
            "reject": self.reject,
            "null_surface": self.null_surface.values.tolist(),
            "surface": self.surface.values.tolist(),
        }


def significance_code(p):
    """

    Conventional significance marks for a p-value.

    Args:
        p (float): p-value

    Returns:
        "***" below 0.001, "**" below 0.01, "*" below 0.05,
        "+" below 0.1, "" otherwise

    """

    for cutoff, code in ((0.001, "***"), (0.01, "**"), (0.05, "*"), (0.1, "+")):
        if p < cutoff:
            return code

    return ""


def _theta_average(surface):
    # (1/pi) * int_0^pi f(u, theta) dtheta, trapezoid on the grid
    theta = surface.grid.theta_points

    return trapezoid(surface.values, theta, axis=1) / (theta[-1] - theta[0])


def _u_average(surface):
    # equally spaced time points: int_0^1 f(u, theta) du as a plain mean
    return surface.values.mean(axis=0)


def null_white_noise(surface):
    """

    Null surface for time-varying white noise: f(u, theta) = g(u),
    with g(u) the frequency average of the estimate.

    Args:
        surface (SpectralSurface): unconstrained estimate

    Returns:
        SpectralSurface constant in theta

    """

    g = _theta_average(surface)

    return surface.with_values(np.repeat(g[:, None], surface.grid.shape[1], axis=1))


def null_stationary(surface):
    """

    Null surface for stationarity: f(u, theta) = h(theta), with h the
    time average of the estimate.

    """

    h = _u_average(surface)

    return surface.with_values(np.repeat(h[None, :], surface.grid.shape[0], axis=0))


def null_separable(surface, eps=EPS_FLOOR):
    """

    Null surface for time-frequency separability,
    f(u, theta) = C_0 g(u) h(theta).

    C_0 is the double integral of the estimate over [0, 1] x [0, pi];
    g and h are its marginal integrals divided by C_0, so the null
    surface is the rank-one product of the two marginals over C_0.

    Args:
        surface (SpectralSurface): unconstrained estimate
        eps (float): relative floor on |C_0|

    Returns:
        SpectralSurface of rank one

    """

    theta = surface.grid.theta_points

    time_marginal = trapezoid(surface.values, theta, axis=1)
    freq_marginal = _u_average(surface)
    C_0 = float(trapezoid(freq_marginal, theta))

    scale = (theta[-1] - theta[0]) * float(np.mean(np.abs(surface.values)))

    if abs(C_0) <= eps * scale:
        raise DegenerateSpectrumError(
            "The integrated spectrum C_0 is numerically zero; the separable null is undefined."
        )

    g = time_marginal / C_0
    h = freq_marginal / C_0

    return surface.with_values(C_0 * np.outer(g, h))


NULL_BUILDERS = {
    "white-noise": null_white_noise,
    "stationarity": null_stationary,
    "separability": null_separable,
}


def run_test(
    series,
    null_builder,
    n,
    B_n,
    N_MC=DEFAULT_N_MC,
    alpha=0.05,
    seed=0,
    dist=None,
    n_jobs=1,
    progress=False,
):
    """

    Generic SCR test: does the null surface fit inside the SCR?

    Args:
        series (TimeSeries): observations
        null_builder: name in NULL_BUILDERS, a callable mapping the
                      estimate to a null SpectralSurface, or a
                      SpectralSurface (e.g. a fitted model spectrum)
        n (int): window length
        B_n (int): lag bandwidth
        N_MC (int): bootstrap replicates
        alpha (float): level
        seed (int): bootstrap seed
        dist (BootstrapDistribution): precomputed bootstrap distribution
                                      for the same grid, optional
        n_jobs (int): worker threads for the bootstrap
        progress (bool): show a progress bar

    Returns:
        TestResult

    """

    check_alpha(alpha)

    grid = build_grid(series.N, n, B_n)
    surface = spectral_surface(series, grid)

    if isinstance(null_builder, SpectralSurface):
        null_surface = null_builder
    elif isinstance(null_builder, str):
        if null_builder not in NULL_BUILDERS:
            raise ValueError(
                f"Unknown null {null_builder!r}; use one of {sorted(NULL_BUILDERS)}."
            )
        null_surface = NULL_BUILDERS[null_builder](surface)
    else:
        null_surface = null_builder(surface)

    statistic = max_relative_deviation(null_surface, surface)

    if dist is None:
        dist = bootstrap_distribution(
            series.N, grid, N_MC=N_MC, seed=seed, n_jobs=n_jobs, progress=progress
        )
    else:
        grid.check_same(dist.grid)

    gamma = critical_value(dist, alpha)

    return TestResult(
        statistic=statistic,
        p_value=dist.p_value(statistic),
        gamma_alpha=gamma,
        reject=statistic > gamma ** 2,
        null_surface=null_surface,
        surface=surface,
        config={
            "n": n,
            "B_n": B_n,
            "C_n": grid.C_n,
            "N": series.N,
            "N_MC": dist.N_MC,
            "seed": dist.seed,
            "alpha": alpha,
        },
    )


def validate_model_spectrum(
    series, model_surface, n, B_n, N_MC=DEFAULT_N_MC, alpha=0.05, seed=0, dist=None, n_jobs=1
):
    """

    Test whether an externally fitted model spectrum fits inside the SCR.

    Args:
        series (TimeSeries): observations
        model_surface (SpectralSurface): model spectrum on the grid
                                         build_grid(N, n, B_n)

    Returns:
        TestResult

    """

    build_grid(series.N, n, B_n).check_same(model_surface.grid)

    return run_test(
        series, model_surface, n, B_n, N_MC=N_MC, alpha=alpha, seed=seed, dist=dist, n_jobs=n_jobs
    )
