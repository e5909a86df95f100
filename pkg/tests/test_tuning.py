import math

import numpy as np
import pytest

from evospec.spectral import TimeSeries
from evospec.tuning import (
    TuningSelection,
    candidate_bounds,
    evaluation_points,
    is_admissible,
    mv_scores,
    mv_select,
)


@pytest.fixture(scope="module")
def series():
    return TimeSeries(np.random.default_rng(0).standard_normal(400))


def test_candidate_bounds():
    assert candidate_bounds(400) == (34, 50)

    base = 1200 ** 0.47
    assert candidate_bounds(1200) == (math.ceil(3 * base), math.floor(4 * base))


@pytest.mark.parametrize("N", [50, 100, 400, 1000, 1001, 5000])
def test_candidate_bounds_are_ordered(N):
    lo, hi = candidate_bounds(N)
    assert lo < hi


def test_candidate_bounds_need_long_series():
    with pytest.raises(ValueError):
        candidate_bounds(49)


def test_is_admissible():
    assert is_admissible(40, 10)
    assert not is_admissible(40, 11)
    assert is_admissible(40, 39, constraint="window")
    assert not is_admissible(40, 40, constraint="window")
    with pytest.raises(ValueError):
        is_admissible(40, 10, constraint="sqrt")


def test_evaluation_points():
    u, theta = evaluation_points(400, 50)

    assert len(u) == 8 and len(theta) == 17
    assert u.min() > 50 / 800 and u.max() < 1 - 50 / 800
    assert np.allclose(np.diff(u), np.diff(u)[0])
    assert theta[0] == 0 and theta[-1] == pytest.approx(np.pi)

    with pytest.raises(ValueError):
        evaluation_points(100, 100)


def test_mv_scores_of_identical_estimates():
    estimates = {(i, j): np.ones(5) for i in range(3) for j in range(3)}
    assert all(s == 0 for s in mv_scores(estimates).values())


def test_mv_scores_use_neighbourhood_only():
    estimates = {(i, 0): np.full(4, float(i == 4)) for i in range(5)}
    scores = mv_scores(estimates)

    assert scores[(0, 0)] == 0
    assert scores[(1, 0)] == 0
    assert scores[(3, 0)] > 0
    assert scores[(4, 0)] > 0


def test_single_candidate(series):
    selection = mv_select(series, bounds=(40, 40), B_min=10, B_max=10)

    assert (selection.n, selection.B_n) == (40, 10)
    assert selection.score_table == {(40, 10): 0.0}
    assert selection.search_bounds == (40, 40)


def test_empty_lattice(series):
    with pytest.raises(ValueError, match="No candidate"):
        mv_select(series, bounds=(20, 20), B_min=10)


def test_bounds_are_checked(series):
    with pytest.raises(ValueError):
        mv_select(series, bounds=(50, 40))
    with pytest.raises(ValueError):
        mv_select(series, bounds=(300, 500))


def test_selection_is_admissible_minimum(series):
    selection = mv_select(series)
    lo, hi = candidate_bounds(400)

    assert isinstance(selection, TuningSelection)
    assert lo <= selection.n <= hi
    assert is_admissible(selection.n, selection.B_n)
    assert all(np.isfinite(s) and s >= 0 for s in selection.score_table.values())
    assert all(is_admissible(n, B) for n, B in selection.score_table)
    assert selection.score_table[(selection.n, selection.B_n)] == min(selection.score_table.values())


def test_selection_is_deterministic(series):
    a = mv_select(series)
    b = mv_select(series, n_jobs=3)

    assert (a.n, a.B_n) == (b.n, b.B_n)
    assert a.score_table == b.score_table


def test_scores_scale_with_fourth_power(series):
    plain = mv_select(series)
    doubled = mv_select(series.scaled(2.0))

    assert (plain.n, plain.B_n) == (doubled.n, doubled.B_n)
    for key, score in plain.score_table.items():
        assert doubled.score_table[key] == pytest.approx(16 * score, rel=1e-12, abs=1e-300)


def test_window_constraint_allows_wider_bandwidths(series):
    log_rule = mv_select(series, bounds=(40, 44))
    window_rule = mv_select(series, bounds=(40, 44), constraint="window")

    assert max(B for _, B in window_rule.score_table) > max(B for _, B in log_rule.score_table)


def test_score_frame(series):
    frame = mv_select(series, bounds=(40, 44)).to_frame()

    assert list(frame.columns) == ["n", "B_n", "score"]
    assert frame["score"].min() >= 0
