"""
The dense time-frequency grid on which maximum deviations and
simultaneous confidence regions are defined.
"""

import math
from dataclasses import dataclass

import numpy as np

from .checks import GridMismatchError, is_positive_int


@dataclass(frozen=True, eq=False)
class TimeFreqGrid:
    """

    Time points u_1 < ... < u_{C_n} crossed with frequencies
    i*pi/B_n, i = 0..B_n, plus the sizes (n, B_n, N) that
    generated them.

    """

    u_points: np.ndarray
    theta_points: np.ndarray
    n: int
    B_n: int
    N: int

    def __post_init__(self):

        u = np.array(self.u_points, dtype=float)
        theta = np.array(self.theta_points, dtype=float)

        if u.ndim != 1 or len(u) == 0:
            raise ValueError("A grid needs at least one time point.")

        if np.any(np.diff(u) <= 0):
            raise ValueError("Grid time points must be strictly increasing.")

        if np.any(u <= 0) or np.any(u >= 1):
            raise ValueError("Grid time points must lie in (0, 1).")

        u.setflags(write=False)
        theta.setflags(write=False)

        object.__setattr__(self, "u_points", u)
        object.__setattr__(self, "theta_points", theta)

    @property
    def C_n(self):
        return len(self.u_points)

    @property
    def shape(self):
        return (len(self.u_points), len(self.theta_points))

    def same_as(self, other):
        """

        Check whether two grids hold identical points and sizes.

        """

        return (
            self.n == other.n
            and self.B_n == other.B_n
            and self.N == other.N
            and np.array_equal(self.u_points, other.u_points)
            and np.array_equal(self.theta_points, other.theta_points)
        )

    def check_same(self, other):

        if not self.same_as(other):
            raise GridMismatchError(
                f"Grid (n={other.n}, B_n={other.B_n}, N={other.N}, C_n={other.C_n}) "
                f"does not match grid (n={self.n}, B_n={self.B_n}, N={self.N}, "
                f"C_n={self.C_n})."
            )

    def to_dict(self):

        return {
            "u": self.u_points.tolist(),
            "theta": self.theta_points.tolist(),
            "n": int(self.n),
            "B_n": int(self.B_n),
            "N": int(self.N),
        }

    @classmethod
    def from_dict(cls, d):

        return cls(
            u_points=np.array(d["u"], dtype=float),
            theta_points=np.array(d["theta"], dtype=float),
            n=int(d["n"]),
            B_n=int(d["B_n"]),
            N=int(d["N"]),
        )


def _check_sizes(N, n, B_n):

    for name, value in (("N", N), ("n", n), ("B_n", B_n)):
        if not is_positive_int(value):
            raise ValueError(f"{name} must be a positive integer, got {value}.")

    if not 1 < n < N:
        raise ValueError(f"Need 1 < n < N, got n={n}, N={N}.")

    if B_n < 3:
        raise ValueError(f"Need B_n >= 3 so that log(B_n) > 1, got B_n={B_n}.")


def default_C_n(N, n, B_n):
    """

    Number of grid time points.

    Args:
        N (int): series length
        n (int): window length
        B_n (int): lag bandwidth

    Returns:
        floor((N/n)(1 - n/N)(1 - 1/log(B_n)^2)), at least 1

    """

    _check_sizes(N, n, B_n)

    c = (N / n) * (1 - n / N) * (1 - 1 / math.log(B_n) ** 2)

    return max(1, math.floor(c))


def frequency_points(B_n):
    """

    Frequencies i*pi/B_n for i = 0..B_n, with exact endpoints 0 and pi.

    """

    theta = np.arange(B_n + 1) * (np.pi / B_n)
    theta[-1] = np.pi

    return theta


def build_grid(N, n, B_n):
    """

    Build the default dense grid.

    Time points are centered in C_n equal cells covering
    (n/2N, 1 - n/2N), so the spacing is (1 - n/N)/C_n.

    Args:
        N (int): series length
        n (int): window length
        B_n (int): lag bandwidth

    Returns:
        TimeFreqGrid

    """

    C_n = default_C_n(N, n, B_n)

    width = 1 - n / N
    u = n / (2 * N) + (np.arange(1, C_n + 1) - 0.5) * width / C_n

    return TimeFreqGrid(u_points=u, theta_points=frequency_points(B_n), n=n, B_n=B_n, N=N)
