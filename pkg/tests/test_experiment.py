import math

import numpy as np
import pytest

from interleaving.experiment import (
    CSV_HEADER, PointResult, SweepSpec, csv_text, estimate_rate, points_by_distance, read_csv,
    run_sweep, wilson_interval,
)


def wilson_formula(k, n, z=1.959963984540054):
    phat = k / n
    centre = (phat + z * z / (2 * n)) / (1 + z * z / n)
    half = z * math.sqrt(phat * (1 - phat) / n + z * z / (4 * n * n)) / (1 + z * z / n)
    return centre - half, centre + half


@pytest.mark.parametrize("k, n", [(0, 100), (3, 100), (50, 100), (100, 100), (17, 5000)])
def test_wilson_interval(k, n):
    lo, hi = wilson_interval(k, n)
    want = wilson_formula(k, n)
    assert lo == pytest.approx(max(want[0], 0.0), abs=1e-12)
    assert hi == pytest.approx(min(want[1], 1.0), abs=1e-12)


def test_forced_zero_rate():
    pt = estimate_rate(1, 4, 0.0, 500, probs=(0.0, 0.0, 0.0))
    assert pt.n_failures == 0 and pt.rate == 0 and pt.ci_lo == 0


def test_rate_ordering_across_threshold():
    below = estimate_rate(1, 12, 0.021, 5000, seed=3)
    above = estimate_rate(1, 12, 0.033, 5000, seed=3)
    assert above.rate > below.rate
    assert above.ci_lo > below.ci_hi


def test_workers_do_not_change_results():
    a = estimate_rate(1, 8, 0.027, 3000, seed=5, workers=1)
    b = estimate_rate(1, 8, 0.027, 3000, seed=5, workers=8)
    assert a == b


@pytest.mark.parametrize("kwargs", [
    dict(p_baselines=()), dict(p_baselines=(0.02, 0.02)), dict(distances=(7,)),
    dict(trials=0), dict(L=0), dict(p_clock=1.0),
])
def test_spec_validation(kwargs):
    base = dict(L=1, distances=(8,), p_baselines=(0.02, 0.03), trials=10)
    with pytest.raises(ValueError):
        SweepSpec(**{**base, **kwargs})


def test_grid_constructor():
    spec = SweepSpec.grid(1, (8, 12, 16), 0.021, 0.033, 0.002, 5000)
    assert spec.p_baselines == (0.021, 0.023, 0.025, 0.027, 0.029, 0.031, 0.033)


def test_csv_round_trip():
    pts = [PointResult(1, 8, 0.021, 10, 3, 0.3, 0.1, 0.6), PointResult(1, 12, 0.023, 10, 0, 0.0, 0.0, 0.27)]
    text = csv_text(pts)
    assert text.splitlines()[0] == CSV_HEADER
    assert read_csv(text) == pts
    with pytest.raises(ValueError):
        read_csv("a,b\n1,2\n")


def test_sweep_continues_past_fit_failures():
    spec = SweepSpec(1, (4, 6), (0.02, 0.03, 0.04), 50, seed=2, n_boot=0)
    result = run_sweep(spec)
    assert len(result.points) == 6
    assert result.threshold is None
    assert len(result.errors) == 3  # two fits plus the threshold itself


def test_sweep_reproducible():
    spec = SweepSpec(1, (6, 8), (0.015, 0.0225, 0.03, 0.0375, 0.045), 400, seed=9, n_boot=5)
    a, b = run_sweep(spec), run_sweep(spec)
    assert csv_text(a.points) == csv_text(b.points)
    assert a.threshold.threshold == b.threshold.threshold
    assert a.threshold.hull == (0.015, 0.045)
    assert a.threshold.hull[0] <= a.threshold.threshold <= a.threshold.hull[1]


def test_finite_size_separation(desk_sweep):
    """One grid step either side of the threshold, larger codes lose then win (3 sigma)."""
    _, points, summary = desk_sweep(1)
    threshold = summary["threshold"]["threshold"]
    data = points_by_distance(points)
    p = data[8][0]
    below = p[p < threshold - 0.001].max()
    above = p[p > threshold + 0.001].min()
    ds = sorted(data)
    for small, large in zip(ds, ds[1:]):
        for where, sign in ((below, -1), (above, 1)):
            i = int(np.flatnonzero(p == where)[0])
            rs = data[small][2][i] / data[small][1][i]
            rl = data[large][2][i] / data[large][1][i]
            se = math.sqrt(rs * (1 - rs) / data[small][1][i] + rl * (1 - rl) / data[large][1][i])
            assert sign * (rl - rs) > 3 * se, (small, large, where, rs, rl)
