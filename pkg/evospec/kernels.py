"""
Data taper tau and lag window a.

tau is the Epanechnikov kernel rescaled so that its square
integrates to one; a is the tri-cube kernel with a(0) = 1.
"""

from functools import lru_cache

import numpy as np
from scipy.integrate import simpson

from .config import QUAD_PANELS

TAU_HALF_WIDTH = 0.5
LAG_WINDOW_HALF_WIDTH = 1.0

_TAU_SCALE = np.sqrt(30) / 4


def tau(x):
    """

    Evaluate the data taper.

    Args:
        x (float or array-like): points

    Returns:
        (sqrt(30)/4)(1 - 4x^2) on |x| < 1/2, zero elsewhere; a float
        for scalar input, an array otherwise

    """

    x = np.asarray(x, dtype=float)
    values = np.where(np.abs(x) < TAU_HALF_WIDTH, _TAU_SCALE * (1 - 4 * x * x), 0.0)

    if values.ndim == 0:
        return float(values)

    return values


def lag_window(x):
    """

    Evaluate the lag window.

    Args:
        x (float or array-like): points

    Returns:
        (1 - |x|^3)^3 on |x| < 1, zero elsewhere

    """

    x = np.asarray(x, dtype=float)
    values = np.where(
        np.abs(x) < LAG_WINDOW_HALF_WIDTH, (1 - np.abs(x) ** 3) ** 3, 0.0
    )

    if values.ndim == 0:
        return float(values)

    return values


def _simpson_power_integral(func, half_width, panels, power=2):

    x = np.linspace(-half_width, half_width, panels + 1)
    y = func(x) ** power

    return float(simpson(y, x=x))


@lru_cache(maxsize=None)
def lag_window_sq_integral(panels=QUAD_PANELS):
    """

    Integral of a^2 over [-1, 1] by composite Simpson.

    Computed once per panel count and cached.

    Args:
        panels (int): number of Simpson panels (even)

    """

    if panels % 2:
        raise ValueError("Simpson's rule needs an even number of panels.")

    return _simpson_power_integral(lag_window, LAG_WINDOW_HALF_WIDTH, panels)


@lru_cache(maxsize=None)
def taper_sq_integral(panels=QUAD_PANELS):
    """

    Integral of tau^2 over its support; equals one up to quadrature error.

    """

    if panels % 2:
        raise ValueError("Simpson's rule needs an even number of panels.")

    return _simpson_power_integral(tau, TAU_HALF_WIDTH, panels)


@lru_cache(maxsize=None)
def taper_fourth_integral(panels=QUAD_PANELS):
    """

    Integral of tau^4 over its support, 10/7 in closed form.

    The variance of the lag-window estimate carries this factor on
    top of the integral of a^2.

    """

    if panels % 2:
        raise ValueError("Simpson's rule needs an even number of panels.")

    return _simpson_power_integral(tau, TAU_HALF_WIDTH, panels, power=4)
