import numpy as np

from interleaving.streams import point_key, stream, trial_streams


def test_streams_reproducible_and_distinct():
    a1, b1 = trial_streams(7, (1, 8, 21000000), 3)
    a2, b2 = trial_streams(7, (1, 8, 21000000), 3)
    x = a1.random(64)
    assert np.array_equal(x, a2.random(64))
    assert not np.array_equal(x, b1.random(64))
    other_trial = trial_streams(7, (1, 8, 21000000), 4)[0].random(64)
    other_point = trial_streams(7, (1, 8, 23000000), 3)[0].random(64)
    other_seed = trial_streams(8, (1, 8, 21000000), 3)[0].random(64)
    for y in (other_trial, other_point, other_seed):
        assert not np.array_equal(x, y)


def test_trial_streams_do_not_overlap():
    key = point_key(0, (5,))
    first = stream(key, 0).random(10_000)
    second = stream(key, 1).random(10_000)
    assert not np.intersect1d(first, second).size
