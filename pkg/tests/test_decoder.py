import time

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from interleaving.decoder import (
    DecodeError, count_failures, decode_failure, edge_probabilities, peel_decode, run_trial,
    sample_erasure, sample_errors, syndrome_of,
)
from interleaving.noise import DirectionalErasure
from interleaving.streams import trial_streams
from interleaving.syndrome import build_syndrome_graphs, membrane_parity


def sigma_bound(n, p, k=3):
    return k * np.sqrt(n * p * (1 - p))


def test_erasure_extremes(graphs4):
    g = graphs4[0]
    rng = np.random.default_rng(0)
    assert not sample_erasure(g, DirectionalErasure(0, 0, 0), rng).any()
    assert sample_erasure(g, 1.0, rng).all()


def test_erasure_rate_by_direction(graphs4):
    g = graphs4[0]
    rng = np.random.default_rng(1)
    n, n_x = 100_000, int((g.direction == 0).sum())
    total = 0
    for _ in range(n):
        er = sample_erasure(g, (0.1, 0.0, 0.0), rng)
        assert not er[g.direction != 0].any()
        total += int(er.sum())
    assert abs(total - 0.1 * n * n_x) < sigma_bound(n * n_x, 0.1)


def test_error_sampling():
    rng = np.random.default_rng(2)
    assert not sample_errors(np.zeros(50, bool), rng).any()
    n, full = 100_000, np.ones(12, bool)
    flips = sum(int(sample_errors(full, rng).sum()) for _ in range(n))
    assert abs(flips - 0.5 * n * 12) < sigma_bound(n * 12, 0.5)
    one = np.zeros(12, bool)
    one[5] = True
    hits = 0
    for _ in range(20_000):
        err = sample_errors(one, rng)
        assert not err[np.arange(12) != 5].any()
        hits += int(err[5])
    assert abs(hits - 10_000) < sigma_bound(20_000, 0.5)


def test_edge_probabilities_validation(graphs4):
    with pytest.raises(ValueError):
        edge_probabilities(graphs4[0], (0.1, 1.2, 0.0))
    p = edge_probabilities(graphs4[0], DirectionalErasure(0.1, 0.2, 0.3))
    assert set(np.round(p, 3).tolist()) == {0.1, 0.2, 0.3}


def test_syndrome_examples(graphs4):
    g = graphs4[0]
    assert not syndrome_of(g, np.zeros(g.n_edges, bool)).any()
    err = np.zeros(g.n_edges, bool)
    err[17] = True
    lit = np.flatnonzero(syndrome_of(g, err))
    assert sorted(lit.tolist()) == sorted([int(g.edge_u[17]), int(g.edge_v[17])])


@settings(max_examples=50, deadline=None)
@given(st.lists(st.booleans(), min_size=192, max_size=192))
def test_syndrome_weight_even(graphs4, bits):
    assert syndrome_of(graphs4[1], np.array(bits)).sum() % 2 == 0


def _path(g, length):
    """Edge ids of a simple path starting at vertex 0."""
    path, seen, v = [], {0}, 0
    while len(path) < length:
        for e in range(g.n_edges):
            u, w = int(g.edge_u[e]), int(g.edge_v[e])
            nxt = w if u == v else u if w == v else None
            if nxt is not None and nxt not in seen:
                path.append(e)
                seen.add(nxt)
                v = nxt
                break
    return path, v


def test_peel_path(graphs4):
    g = graphs4[0]
    path, end = _path(g, 4)
    erasure = np.zeros(g.n_edges, bool)
    erasure[path] = True
    syn = np.zeros(g.n_vertices, np.uint8)
    syn[[0, end]] = 1
    corr = peel_decode(g, erasure, syn)
    assert sorted(np.flatnonzero(corr).tolist()) == sorted(path)


def test_peel_zero_syndrome(graphs4):
    g = graphs4[0]
    rng = np.random.default_rng(3)
    for _ in range(100):
        er = sample_erasure(g, 0.4, rng)
        assert not peel_decode(g, er, np.zeros(g.n_vertices, np.uint8)).any()


def test_peel_unrealizable(graphs4):
    g = graphs4[0]
    syn = np.zeros(g.n_vertices, np.uint8)
    syn[[0, 1]] = 1
    with pytest.raises(DecodeError):
        peel_decode(g, np.zeros(g.n_edges, bool), syn)


def test_peel_monte_carlo_contract(graphs4):
    rng = np.random.default_rng(4)
    for t in range(10_000):
        g = graphs4[t % 2]
        er = sample_erasure(g, rng.uniform(0.05, 0.6), rng)
        err = sample_errors(er, rng)
        syn = syndrome_of(g, err)
        corr = peel_decode(g, er, syn)
        assert not (corr & ~er).any()
        assert np.array_equal(syndrome_of(g, corr), syn)


def test_decode_failure_matches_membranes(graphs4):
    g = graphs4[0]
    rng = np.random.default_rng(5)
    for _ in range(500):
        er = sample_erasure(g, 0.45, rng)
        err = sample_errors(er, rng)
        corr = peel_decode(g, er, syndrome_of(g, err))
        assert decode_failure(g, er, err) == bool(membrane_parity(g, corr ^ err).any())


def test_run_trial_extremes(graphs4):
    primal, dual = graphs4
    assert not any(run_trial(primal, dual, 0.0, seed=1, trial=t).fail for t in range(200))
    fails = count_failures(primal, dual, 1.0, seed=2, point_id=(9,), trials=range(10_000))
    assert fails / 10_000 > 0.9


def test_deep_subthreshold():
    primal, dual = build_syndrome_graphs(12)
    fails = count_failures(primal, dual, 0.02, seed=3, point_id=(12,), trials=range(10_000))
    assert fails / 10_000 < 1e-2


def test_outcome_fields(graphs4):
    out = run_trial(*graphs4, 0.5, seed=4, trial=7)
    assert out.fail == (out.primal_fail or out.dual_fail)
    with pytest.raises(ValueError):
        run_trial(graphs4[0], build_syndrome_graphs(6)[1], 0.1)


def test_determinism_and_splitting(graphs4):
    primal, dual = graphs4
    a = [run_trial(primal, dual, 0.3, seed=11, point_id=(1, 2), trial=t) for t in range(300)]
    b = [run_trial(primal, dual, 0.3, seed=11, point_id=(1, 2), trial=t) for t in range(300)]
    assert a == b
    whole = count_failures(primal, dual, 0.3, 11, (1, 2), range(300))
    parts = sum(count_failures(primal, dual, 0.3, 11, (1, 2), range(s, min(s + 70, 300)))
                for s in range(0, 300, 70))
    assert whole == parts == sum(o.fail for o in a)
    other = [run_trial(primal, dual, 0.3, seed=12, point_id=(1, 2), trial=t) for t in range(300)]
    assert other != a


def test_correlated_toggle_shares_erasure(graphs4):
    primal, dual = graphs4
    p_edge = edge_probabilities(primal, 0.4)
    for t in range(300):
        rng_p, rng_d = trial_streams(6, (3,), t)
        erasure = rng_p.random(primal.n_edges) < p_edge
        want_p = decode_failure(primal, erasure, sample_errors(erasure, rng_p))
        want_d = decode_failure(dual, erasure, sample_errors(erasure, rng_d))
        got = run_trial(primal, dual, 0.4, 6, point_id=(3,), trial=t, correlated=True)
        assert (got.primal_fail, got.dual_fail) == (want_p, want_d)


def test_d20_trial_cost():
    primal, dual = build_syndrome_graphs(20)
    run_trial(primal, dual, 0.12, trial=0)
    n = 200
    start = time.perf_counter()
    for t in range(n):
        run_trial(primal, dual, 0.12, trial=t)
    assert (time.perf_counter() - start) / n < 10e-3
