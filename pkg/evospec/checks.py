import math

import numpy as np

from .config import EPS_FLOOR


class DegenerateSpectrumError(ValueError):
    """

    A ratio denominator fell below the epsilon floor.

    """


class GridMismatchError(ValueError):
    """

    Two surfaces, or a surface and a grid, live on different grids.

    """


def is_positive_int(x):
    """

    Check if a value is a positive integer (bools excluded).

    Args:
        x: value to check

    """

    return isinstance(x, (int, np.integer)) and not isinstance(x, bool) and x > 0


def check_finite(name, x):

    if not math.isfinite(x):
        raise ValueError(f"{name} must be finite, got {x}.")


def check_alpha(alpha):

    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}.")


def check_window(N, n, B_n=None):
    """

    Validate window length n and lag bandwidth B_n against a
    series of length N.

    Args:
        N (int): series length
        n (int): window length
        B_n (int): lag bandwidth, optional

    """

    if not is_positive_int(n):
        raise ValueError(f"Window length n must be a positive integer, got {n}.")

    if n > N:
        raise ValueError(f"Window length n={n} exceeds the series length N={N}.")

    if B_n is not None:

        if not is_positive_int(B_n):
            raise ValueError(f"Bandwidth B_n must be a positive integer, got {B_n}.")

        if B_n >= n:
            raise ValueError(f"Bandwidth B_n={B_n} must be smaller than n={n}.")


def ratio_floor(values, eps=EPS_FLOOR):
    """

    Absolute floor for ratio denominators: eps times the mean
    absolute value.

    Args:
        values (ndarray): denominators
        eps (float): relative floor

    """

    return eps * float(np.mean(np.abs(values)))


def check_denominator(values, eps=EPS_FLOOR, what="center surface"):
    """

    Raise DegenerateSpectrumError when any |value| falls below
    the epsilon floor.

    Args:
        values (ndarray): denominators of a ratio statistic
        eps (float): relative floor
        what (str): name used in the error message

    """

    values = np.asarray(values)
    floor = ratio_floor(values, eps)

    if floor == 0 or np.any(np.abs(values) < floor):
        raise DegenerateSpectrumError(
            f"The {what} has values within {eps:g} (relative) of zero; "
            "ratio statistics are undefined there."
        )
