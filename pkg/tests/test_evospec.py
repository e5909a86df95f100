import numpy as np
import pytest

from evospec import __version__
from evospec.utils import parallel_map, substream


def test_version():
    assert __version__ == '0.1.0'


def test_substreams_are_addressed_by_key():
    assert np.array_equal(substream(1, 2).random(5), substream(1, 2).random(5))
    assert not np.array_equal(substream(1, 2).random(5), substream(1, 3).random(5))
    assert not np.array_equal(substream(1, 2).random(5), substream(2, 2).random(5))

    with pytest.raises(ValueError):
        substream(-1)


def test_parallel_map_keeps_order():
    items = list(range(50))

    assert parallel_map(lambda x: x * x, items) == [x * x for x in items]
    assert parallel_map(lambda x: x * x, items, n_jobs=4) == [x * x for x in items]
