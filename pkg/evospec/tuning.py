"""
Minimum-volatility (MV) selection of the window length n and the lag
bandwidth B_n.

Every admissible (n, B_n) on a lattice is used to estimate the
spectrum on one fixed evaluation grid; the chosen pair is the one
whose estimates vary least across its lattice neighbours.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np
import pandas as pd

from .config import (
    MV_B_MIN,
    MV_EVAL_THETA,
    MV_EVAL_U,
    MV_ETA,
    MV_LARGE_N,
    MV_STEP_B,
    MV_STEP_N,
)
from .spectral import evaluate_surface
from .utils import parallel_map

CONSTRAINTS = ("log", "window")


@dataclass(frozen=True)
class TuningSelection:
    """

    Selected (n, B_n) with the MV score of every admissible candidate.

    """

    n: int
    B_n: int
    score_table: Dict[Tuple[int, int], float] = field(repr=False)
    search_bounds: Tuple[int, int]

    def to_frame(self):

        return pd.DataFrame(
            [(n, B, s) for (n, B), s in sorted(self.score_table.items())],
            columns=["n", "B_n", "score"],
        )


def candidate_bounds(N, eta=MV_ETA):
    """

    Search interval [n_l, n_r] for the window length.

    Args:
        N (int): series length, at least 50
        eta (float): growth exponent

    Returns:
        (ceil(2 N^eta), floor(3 N^eta)) for N <= 1000,
        (ceil(3 N^eta), floor(4 N^eta)) above

    """

    if N < 50:
        raise ValueError(f"MV selection needs N >= 50, got N={N}.")

    base = N ** eta
    lo, hi = (2, 3) if N <= MV_LARGE_N else (3, 4)

    return math.ceil(lo * base), math.floor(hi * base)


def is_admissible(n, B_n, constraint="log"):
    """

    Check a candidate pair against the bandwidth constraint.

    Args:
        n (int): window length
        B_n (int): lag bandwidth
        constraint (str): "log" for B_n < n / log(n), "window" for B_n < n

    """

    if constraint == "log":
        return B_n < n / math.log(n)

    if constraint == "window":
        return B_n < n

    raise ValueError(f"Unknown constraint {constraint!r}; use one of {CONSTRAINTS}.")


def evaluation_points(N, n_r, n_u=MV_EVAL_U, n_theta=MV_EVAL_THETA):
    """

    Fixed evaluation grid shared by all candidates: n_u time points
    centered in equal cells of (n_r/2N, 1 - n_r/2N) and n_theta
    equally spaced frequencies on [0, pi].

    """

    lo = n_r / (2 * N)
    width = 1 - 2 * lo

    if width <= 0:
        raise ValueError(f"Largest window n_r={n_r} leaves no room in a series of length {N}.")

    u = lo + (np.arange(1, n_u + 1) - 0.5) * width / n_u
    theta = np.linspace(0, np.pi, n_theta)

    return u, theta


def _lattice(bounds, step_n, step_B, B_min, B_max, constraint):

    n_values = list(range(bounds[0], bounds[1] + 1, step_n))

    if B_max is None:
        B_max = max(
            (B for n in n_values for B in range(B_min, n) if is_admissible(n, B, constraint)),
            default=B_min,
        )

    B_values = list(range(B_min, B_max + 1, step_B))

    return n_values, B_values


def mv_scores(estimates):
    """

    MV score of each lattice cell: the mean over evaluation points of
    the sample variance across the cell's Chebyshev neighbourhood
    (at most 3 x 3 cells, truncated at the lattice edge, admissible
    cells only).

    Args:
        estimates (dict): (i, j) lattice index -> estimate array

    Returns:
        dict (i, j) -> score

    """

    scores = {}

    for (i, j) in estimates:

        block = [
            estimates[(i + di, j + dj)]
            for di in (-1, 0, 1)
            for dj in (-1, 0, 1)
            if (i + di, j + dj) in estimates
        ]

        if len(block) < 2:
            scores[(i, j)] = 0.0
        else:
            scores[(i, j)] = float(np.mean(np.var(np.stack(block), axis=0, ddof=1)))

    return scores


def mv_select(
    series,
    bounds=None,
    step_n=MV_STEP_N,
    step_B=MV_STEP_B,
    B_min=MV_B_MIN,
    B_max=None,
    constraint="log",
    eval_points=None,
    n_jobs=1,
    progress=False,
):
    """

    Select (n, B_n) by minimum volatility.

    Args:
        series (TimeSeries): observations
        bounds (tuple): (n_l, n_r); defaults to candidate_bounds(N)
        step_n (int): lattice step in n
        step_B (int): lattice step in B_n
        B_min (int): smallest bandwidth
        B_max (int): largest bandwidth; defaults to the largest
                     admissible value for the window range
        constraint (str): "log" (B_n < n/log n) or "window" (B_n < n)
        eval_points (tuple): (u, theta) evaluation grid; defaults to
                             evaluation_points(N, n_r)
        n_jobs (int): worker threads
        progress (bool): show a progress bar

    Returns:
        TuningSelection

    """

    N = series.N

    if bounds is None:
        bounds = candidate_bounds(N)

    bounds = (int(bounds[0]), int(bounds[1]))

    if bounds[0] > bounds[1]:
        raise ValueError(f"Empty window range n_l={bounds[0]} > n_r={bounds[1]}.")

    if bounds[1] > N:
        raise ValueError(f"Largest window n_r={bounds[1]} exceeds N={N}.")

    n_values, B_values = _lattice(bounds, step_n, step_B, B_min, B_max, constraint)

    cells = [
        (i, j)
        for i, n in enumerate(n_values)
        for j, B in enumerate(B_values)
        if is_admissible(n, B, constraint) and B < n
    ]

    if not cells:
        rule = "B_n < n/log(n)" if constraint == "log" else "B_n < n"
        raise ValueError(
            f"No candidate satisfies {rule} with n in [{bounds[0]}, {bounds[1]}] "
            f"and B_n >= {B_min}."
        )

    if eval_points is None:
        eval_points = evaluation_points(N, bounds[1])

    u, theta = eval_points

    values = parallel_map(
        lambda cell: evaluate_surface(series, u, theta, n_values[cell[0]], B_values[cell[1]]),
        cells,
        n_jobs=n_jobs,
        progress=progress,
        desc="MV lattice",
    )

    scores = mv_scores(dict(zip(cells, values)))

    score_table = {(n_values[i], B_values[j]): s for (i, j), s in scores.items()}

    # smaller (n, B_n) wins ties
    n, B_n = min(score_table, key=lambda key: (score_table[key], key))

    return TuningSelection(n=n, B_n=B_n, score_table=score_table, search_bounds=bounds)
