"""
Coverage, power and model-validation experiments on simulated series.

Every replicate draws its series from the stream
(seed, SIMULATION_STREAM, rep), so reports are bit-identical for any
number of worker threads, and power runs reuse the same innovations
across departures delta.
"""

import time
from collections import Counter
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .checks import check_alpha
from .config import DEFAULT_N_MC, SIMULATION_STREAM
from .grid import build_grid
from .hypotheses import run_test, validate_model_spectrum
from .scr import bootstrap_distribution, build_scr, critical_value, scr_contains
from .simulators import ModelSpec, preset, simulate, truth_surface
from .spectral import spectral_surface
from .tuning import mv_select
from .utils import bcolors, bold, parallel_map
from .whittle import default_u_grid, fit_tvarma, model_surface

# test kinds of the power study and the null each one uses
TEST_KINDS = {
    "separability": "separability",
    "stationarity": "stationarity",
    "white_noise": "white-noise",
}

TUNINGS = ("fixed", "mv")


@dataclass(frozen=True, eq=False)
class ExperimentReport:
    """

    Outcome of a Monte-Carlo experiment.

    For coverage runs a replicate's outcome is 1 when the true
    spectrum leaves the SCR somewhere on the grid, so the mean is
    the non-coverage rate; for power and validation runs it is 1
    when the test rejects.

    When (n, B_n) is selected per replicate, n and B_n hold the most
    frequent selection and per_rep_tuning every replicate's pair.

    """

    model: ModelSpec
    N: int
    n: int
    B_n: int
    alpha: float
    reps: int
    N_MC: int
    seed: int
    per_rep_outcomes: np.ndarray = field(repr=False)
    wall_time: float = 0.0
    delta: Optional[float] = None
    test_kind: Optional[str] = None
    per_rep_tuning: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):

        outcomes = np.array(self.per_rep_outcomes, dtype=np.int8)

        if len(outcomes) != self.reps:
            raise ValueError(f"Expected {self.reps} outcomes, got {len(outcomes)}.")

        outcomes.setflags(write=False)
        object.__setattr__(self, "per_rep_outcomes", outcomes)

        if self.per_rep_tuning is not None:

            tuning = np.array(self.per_rep_tuning, dtype=int)

            if tuning.shape != (self.reps, 2):
                raise ValueError(
                    f"Expected one (n, B_n) pair per replicate, got shape {tuning.shape}."
                )

            tuning.setflags(write=False)
            object.__setattr__(self, "per_rep_tuning", tuning)

    @property
    def coverage_or_rejection(self):
        return float(np.mean(self.per_rep_outcomes))

    def to_dict(self):

        return {
            "model": self.model.to_dict(),
            "N": self.N,
            "n": self.n,
            "B_n": self.B_n,
            "alpha": self.alpha,
            "reps": self.reps,
            "N_MC": self.N_MC,
            "seed": self.seed,
            "delta": self.delta,
            "test_kind": self.test_kind,
            "coverage_or_rejection": self.coverage_or_rejection,
            "per_rep_outcomes": self.per_rep_outcomes.tolist(),
            "per_rep_tuning": None if self.per_rep_tuning is None else self.per_rep_tuning.tolist(),
            "wall_time": self.wall_time,
        }


def _check_reps(reps):

    if reps < 1:
        raise ValueError(f"Need at least one replicate, got reps={reps}.")


def _check_tuning(tuning, n, B_n):

    if tuning not in TUNINGS:
        raise ValueError(f"Unknown tuning {tuning!r}; use one of {TUNINGS}.")

    if tuning == "fixed" and (n is None or B_n is None):
        raise ValueError("Fixed tuning needs both n and B_n.")

    if tuning == "mv" and (n is not None or B_n is not None):
        raise ValueError("MV tuning selects n and B_n per replicate; do not give them.")


def _pilot_tuning(spec, N, seed, constraint, n_jobs, progress):
    """

    (n, B_n) chosen by MV selection on replicate 0.

    """

    pilot = simulate(spec, N, seed, SIMULATION_STREAM, 0)
    selection = mv_select(pilot, constraint=constraint, n_jobs=n_jobs)

    if progress:
        print(f"MV selected {bold(f'n={selection.n}, B_n={selection.B_n}')} on the pilot series")

    return selection.n, selection.B_n


def _mv_pair(spec, N, seed, rep, constraint):

    selection = mv_select(simulate(spec, N, seed, SIMULATION_STREAM, rep), constraint=constraint)

    return selection.n, selection.B_n


def coverage_experiment(
    spec,
    N,
    n=None,
    B_n=None,
    alpha=0.05,
    reps=200,
    N_MC=DEFAULT_N_MC,
    seed=0,
    form="ratio",
    tuning="fixed",
    constraint="window",
    n_jobs=1,
    progress=False,
):
    """

    Non-coverage of the bootstrap SCR for a simulated model.

    The bootstrap critical value depends only on (N, grid, N_MC,
    seed), so it is computed once per distinct (n, B_n) and shared
    by all replicates using that pair.

    Args:
        spec (ModelSpec): model to simulate
        N (int): series length
        n (int): window length; None with tuning="mv"
        B_n (int): lag bandwidth; None with tuning="mv"
        alpha (float): level
        reps (int): outer replicates
        N_MC (int): bootstrap replicates
        seed (int): master seed
        form (str): band form, "ratio" or "exp"
        tuning (str): "fixed" uses (n, B_n); "mv" selects them on
                      every replicate by minimum volatility
        constraint (str): bandwidth rule for MV selection
        n_jobs (int): worker threads
        progress (bool): show progress bars

    Returns:
        ExperimentReport

    """

    check_alpha(alpha)
    _check_reps(reps)
    _check_tuning(tuning, n, B_n)

    start = time.perf_counter()

    if tuning == "fixed":
        pairs = [(n, B_n)] * reps
    else:
        pairs = parallel_map(
            lambda rep: _mv_pair(spec, N, seed, rep, constraint),
            range(reps),
            n_jobs=n_jobs,
            progress=progress,
            desc="MV selection",
        )

    setups = {}

    for pair in sorted(set(pairs)):

        grid = build_grid(N, *pair)
        dist = bootstrap_distribution(N, grid, N_MC=N_MC, seed=seed, n_jobs=n_jobs, progress=progress)

        setups[pair] = (grid, truth_surface(spec, grid, seed=seed), critical_value(dist, alpha))

    def escapes(rep):
        grid, truth, gamma = setups[pairs[rep]]
        series = simulate(spec, N, seed, SIMULATION_STREAM, rep)
        scr = build_scr(spectral_surface(series, grid), gamma, alpha, form=form)
        return int(not scr_contains(scr, truth))

    outcomes = parallel_map(escapes, range(reps), n_jobs=n_jobs, progress=progress, desc="coverage")

    if tuning == "mv":
        n, B_n = Counter(pairs).most_common(1)[0][0]

    return ExperimentReport(
        model=spec,
        N=N,
        n=n,
        B_n=B_n,
        alpha=alpha,
        reps=reps,
        N_MC=N_MC,
        seed=seed,
        per_rep_outcomes=outcomes,
        wall_time=time.perf_counter() - start,
        per_rep_tuning=pairs if tuning == "mv" else None,
    )


def _family(family):

    if isinstance(family, str):
        return lambda delta: preset(family, delta)

    return family


def power_reports(
    family,
    N,
    alpha=0.05,
    deltas=(0.0, 0.2, 0.4),
    reps=200,
    N_MC=DEFAULT_N_MC,
    seed=0,
    test_kind="stationarity",
    n=None,
    B_n=None,
    constraint="window",
    n_jobs=1,
    progress=False,
):
    """

    Rejection rates of an SCR test along a family of models.

    When neither n nor B_n is given they are chosen by MV selection
    on one pilot series drawn at the first delta, and held fixed
    across the family.

    Args:
        family: preset name (e.g. "tvarch1_drift", "tvma1") or a
                callable delta -> ModelSpec
        N (int): series length
        alpha (float): level
        deltas (sequence): departures from the null
        reps (int): replicates per delta
        N_MC (int): bootstrap replicates
        seed (int): master seed
        test_kind (str): "stationarity", "white_noise" or "separability"
        n (int): window length, optional
        B_n (int): lag bandwidth, optional
        constraint (str): bandwidth rule for MV selection
        n_jobs (int): worker threads
        progress (bool): show progress bars

    Returns:
        list of ExperimentReport, one per delta

    """

    check_alpha(alpha)

    if test_kind not in TEST_KINDS:
        raise ValueError(f"Unknown test kind {test_kind!r}; use one of {sorted(TEST_KINDS)}.")

    if (n is None) != (B_n is None):
        raise ValueError("Give both n and B_n, or neither to select them by MV.")

    _check_reps(reps)

    deltas = [float(d) for d in deltas]

    if not deltas:
        raise ValueError("Need at least one delta.")

    make = _family(family)
    null = TEST_KINDS[test_kind]

    if n is None:
        n, B_n = _pilot_tuning(make(deltas[0]), N, seed, constraint, n_jobs, progress)

    grid = build_grid(N, n, B_n)
    dist = bootstrap_distribution(N, grid, N_MC=N_MC, seed=seed, n_jobs=n_jobs, progress=progress)

    reports = []

    for delta in deltas:

        start = time.perf_counter()
        spec = make(delta)

        def rejects(rep):
            series = simulate(spec, N, seed, SIMULATION_STREAM, rep)
            return int(run_test(series, null, n, B_n, alpha=alpha, dist=dist).reject)

        outcomes = parallel_map(
            rejects, range(reps), n_jobs=n_jobs, progress=progress, desc=f"delta={delta:g}"
        )

        report = ExperimentReport(
            model=spec,
            N=N,
            n=n,
            B_n=B_n,
            alpha=alpha,
            reps=reps,
            N_MC=N_MC,
            seed=seed,
            per_rep_outcomes=outcomes,
            wall_time=time.perf_counter() - start,
            delta=delta,
            test_kind=test_kind,
        )

        if progress:
            print(
                f"{bcolors.OKBLUE}delta={delta:g}{bcolors.ENDC} "
                f"rejection rate {report.coverage_or_rejection:.3f}"
            )

        reports.append(report)

    return reports


def power_experiment(family, N, alpha=0.05, deltas=(0.0, 0.2, 0.4), **kwargs) -> List[Tuple[float, float]]:
    """

    Rejection rate per delta; see power_reports for the arguments.

    """

    reports = power_reports(family, N, alpha=alpha, deltas=deltas, **kwargs)

    return [(r.delta, r.coverage_or_rejection) for r in reports]


def validation_experiment(
    spec,
    N,
    p=1,
    q=0,
    alpha=0.05,
    reps=200,
    N_MC=DEFAULT_N_MC,
    seed=0,
    n=None,
    B_n=None,
    window=None,
    u_points=9,
    constraint="window",
    n_jobs=1,
    progress=False,
):
    """

    Rejection rate of the tvARMA validation test when the fitted
    model class contains the truth.

    Each replicate fits a tvARMA(p, q) model by local Whittle
    likelihood and checks its spectrum against the bootstrap SCR of
    the same series. Without n and B_n they are chosen by MV
    selection on a pilot series.

    Args:
        spec (ModelSpec or str): model to simulate, or a preset name
        N (int): series length
        p (int): fitted AR order
        q (int): fitted MA order
        alpha (float): level
        reps (int): replicates
        N_MC (int): bootstrap replicates
        seed (int): master seed
        n (int): window length, optional
        B_n (int): lag bandwidth, optional
        window (int): local Whittle window; N // 4 by default
        u_points (int): number of fit time points
        constraint (str): bandwidth rule for MV selection
        n_jobs (int): worker threads
        progress (bool): show progress bars

    Returns:
        ExperimentReport with test_kind "validation"

    """

    check_alpha(alpha)
    _check_reps(reps)

    if (n is None) != (B_n is None):
        raise ValueError("Give both n and B_n, or neither to select them by MV.")

    if isinstance(spec, str):
        spec = preset(spec)

    if window is None:
        window = max(N // 4, 8 * (p + q + 1))

    start = time.perf_counter()

    if n is None:
        n, B_n = _pilot_tuning(spec, N, seed, constraint, n_jobs, progress)

    grid = build_grid(N, n, B_n)
    dist = bootstrap_distribution(N, grid, N_MC=N_MC, seed=seed, n_jobs=n_jobs, progress=progress)
    u_grid = default_u_grid(N, window, u_points)

    def rejects(rep):
        series = simulate(spec, N, seed, SIMULATION_STREAM, rep)
        model = fit_tvarma(series, p, q, u_grid, window, seed=seed)
        result = validate_model_spectrum(
            series, model_surface(model, grid), n, B_n, alpha=alpha, dist=dist
        )
        return int(result.reject)

    outcomes = parallel_map(rejects, range(reps), n_jobs=n_jobs, progress=progress, desc="validation")

    return ExperimentReport(
        model=spec,
        N=N,
        n=n,
        B_n=B_n,
        alpha=alpha,
        reps=reps,
        N_MC=N_MC,
        seed=seed,
        per_rep_outcomes=outcomes,
        wall_time=time.perf_counter() - start,
        test_kind="validation",
    )
