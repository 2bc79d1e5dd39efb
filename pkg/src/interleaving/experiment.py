"""Monte Carlo logical error rates, sweeps and threshold estimation."""

from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np
from scipy.stats import binomtest

from . import fitting
from .decoder import count_failures
from .noise import DirectionalErasure, NoiseParams, directional_erasure, per_bin_loss
from .syndrome import build_syndrome_graphs

log = logging.getLogger(__name__)

P_CLOCK = per_bin_loss(0.2, 0.2)  # 0.2 dB/km fiber, 1 ns bins at 0.2 m/ns
CHUNK = 1000
CSV_HEADER = "L,d,p_baseline,n_trials,n_failures,rate,ci_lo,ci_hi"

DESK_DISTANCES = (8, 12, 16)
DESK_TRIALS = 5000
LARGE_DISTANCES = (12, 16, 20)
LARGE_TRIALS = 15000


@dataclass(frozen=True)
class PointResult:
    L: int
    d: int
    p_baseline: float
    n_trials: int
    n_failures: int
    rate: float
    ci_lo: float
    ci_hi: float

    def csv_row(self) -> str:
        return (f"{self.L},{self.d},{self.p_baseline:.6g},{self.n_trials},{self.n_failures},"
                f"{self.rate:.10g},{self.ci_lo:.10g},{self.ci_hi:.10g}")


@dataclass(frozen=True)
class SweepSpec:
    L: int
    distances: tuple[int, ...]
    p_baselines: tuple[float, ...]
    trials: int
    p_clock: float = P_CLOCK
    seed: int = 0
    n_boot: int = 200
    correlated: bool = False

    def __post_init__(self):
        object.__setattr__(self, "distances", tuple(int(d) for d in self.distances))
        object.__setattr__(self, "p_baselines", tuple(float(p) for p in self.p_baselines))
        if self.L < 1:
            raise ValueError("rastering length must be >= 1")
        if not self.distances or any(d % 2 or d < 4 for d in self.distances):
            raise ValueError(f"distances must be even and >= 4, got {self.distances}")
        if not self.p_baselines:
            raise ValueError("p_baseline grid is empty")
        if any(b <= a for a, b in zip(self.p_baselines, self.p_baselines[1:])):
            raise ValueError("p_baseline grid must be strictly increasing")
        if self.trials < 1:
            raise ValueError("need at least one trial per point")
        if not 0.0 <= self.p_clock < 1.0:
            raise ValueError("p_clock must lie in [0, 1)")

    @classmethod
    def grid(cls, L, distances, start, stop, step, trials, **kwargs) -> "SweepSpec":
        n = int(round((stop - start) / step)) + 1
        return cls(L, tuple(distances), tuple(round(start + i * step, 10) for i in range(n)),
                   trials, **kwargs)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class SweepResult:
    spec: SweepSpec
    points: list[PointResult]
    threshold: fitting.ThresholdEstimate | None
    errors: list[str] = field(default_factory=list)

    def data(self) -> dict[int, tuple]:
        return points_by_distance(self.points)


def wilson_interval(k: int, n: int, confidence: float = 0.95) -> tuple[float, float]:
    ci = binomtest(k, n).proportion_ci(confidence_level=confidence, method="wilson")
    return float(ci.low), float(ci.high)


def point_id(L: int, d: int, p_baseline: float) -> tuple[int, int, int]:
    return (int(L), int(d), int(round(p_baseline * 1e9)))


@lru_cache(maxsize=8)
def graphs(d: int):
    return build_syndrome_graphs(d)


def _chunk_failures(task) -> int:
    d, probs, seed, pid, start, stop, correlated = task
    primal, dual = graphs(d)
    return count_failures(primal, dual, probs, seed, pid, range(start, stop), correlated)


def _tasks(d, probs, seed, pid, n_trials, correlated):
    return [(d, probs, seed, pid, s, min(s + CHUNK, n_trials), correlated)
            for s in range(0, n_trials, CHUNK)]


def _run(tasks, workers: int) -> list[int]:
    if workers == 0:
        workers = os.cpu_count() or 1
    if workers <= 1 or len(tasks) <= 1:
        return [_chunk_failures(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_chunk_failures, tasks))


def _point(L, d, p_baseline, n_trials, failures) -> PointResult:
    lo, hi = wilson_interval(failures, n_trials)
    return PointResult(L, d, p_baseline, n_trials, failures, failures / n_trials, lo, hi)


def erasure_for(L: int, p_baseline: float, p_clock: float = P_CLOCK) -> DirectionalErasure:
    return directional_erasure(NoiseParams(p_baseline, p_clock), L)


def estimate_rate(L: int, d: int, p_baseline: float, n_trials: int, seed: int = 0, *,
                  p_clock: float = P_CLOCK, workers: int = 1, probs=None,
                  correlated: bool = False) -> PointResult:
    """Logical error rate of one (L, d, p_baseline) point.

    ``probs`` overrides the erasure probabilities derived from the noise
    model (e.g. to force them to zero).
    """
    if d % 2 or d < 4:
        raise ValueError(f"block size must be even and >= 4, got {d}")
    if n_trials < 1:
        raise ValueError("need at least one trial")
    if probs is None:
        probs = erasure_for(L, p_baseline, p_clock)
    if isinstance(probs, DirectionalErasure):
        probs = probs.as_tuple()
    pid = point_id(L, d, p_baseline)
    failures = sum(_run(_tasks(d, probs, seed, pid, n_trials, correlated), workers))
    return _point(L, d, p_baseline, n_trials, failures)


def points_by_distance(points: list[PointResult]) -> dict[int, tuple]:
    out = {}
    for d in sorted({pt.d for pt in points}):
        row = sorted((pt for pt in points if pt.d == d), key=lambda pt: pt.p_baseline)
        out[d] = (np.array([pt.p_baseline for pt in row]),
                  np.array([pt.n_trials for pt in row]),
                  np.array([pt.n_failures for pt in row]))
    return out


def threshold_from_points(points: list[PointResult], *, n_boot: int = 200, seed: int = 0,
                          L=None, errors: list[str] | None = None) -> fitting.ThresholdEstimate:
    """Fit every distance, then cross the fits; failed fits are skipped and noted."""
    data = points_by_distance(points)
    fits = {}
    for d, (p, n, k) in data.items():
        try:
            fits[d] = fitting.fit_curve(p, k / n)
        except (fitting.FitError, ValueError) as exc:
            msg = f"fit failed for L={L} d={d}: {exc}"
            log.warning(msg)
            if errors is not None:
                errors.append(msg)
    if len(fits) < 2:
        raise fitting.ThresholdError("fewer than two distances could be fitted")
    p_all = np.concatenate([v[0] for v in data.values()])
    hull = (float(p_all.min()), float(p_all.max()))
    used = {d: data[d] for d in fits}
    return fitting.find_threshold(fits, hull, data=used, n_boot=n_boot, seed=seed, L=L)


def run_sweep(spec: SweepSpec, workers: int = 1) -> SweepResult:
    """Evaluate every (d, p_baseline) point of ``spec`` and extract the threshold."""
    layout, tasks = [], []
    for d in spec.distances:
        for p in spec.p_baselines:
            probs = erasure_for(spec.L, p, spec.p_clock).as_tuple()
            chunk = _tasks(d, probs, spec.seed, point_id(spec.L, d, p), spec.trials,
                           spec.correlated)
            layout.append((d, p, len(chunk)))
            tasks.extend(chunk)
    counts = iter(_run(tasks, workers))
    points = []
    for d, p, n_chunks in layout:
        failures = sum(next(counts) for _ in range(n_chunks))
        points.append(_point(spec.L, d, p, spec.trials, failures))

    errors: list[str] = []
    try:
        threshold = threshold_from_points(points, n_boot=spec.n_boot, seed=spec.seed,
                                          L=spec.L, errors=errors)
    except fitting.ThresholdError as exc:
        errors.append(str(exc))
        threshold = None
    return SweepResult(spec, points, threshold, errors)


def csv_text(points: list[PointResult]) -> str:
    return "\n".join([CSV_HEADER] + [pt.csv_row() for pt in points]) + "\n"


def read_csv(text: str) -> list[PointResult]:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines or lines[0].strip() != CSV_HEADER:
        raise ValueError(f"expected header {CSV_HEADER!r}")
    out = []
    for ln in lines[1:]:
        L, d, p, n, k, rate, lo, hi = ln.split(",")
        out.append(PointResult(int(L), int(d), float(p), int(n), int(k),
                               float(rate), float(lo), float(hi)))
    return out
