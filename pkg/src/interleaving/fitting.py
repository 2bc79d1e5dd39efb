"""Beta-CDF fits of logical error curves and threshold crossings."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize
from scipy.special import betainc

PARAM_NAMES = ("p_max", "p_lo", "width", "a", "b")
# search box: shapes stay moderate and the rising edge stays near the window
SHAPE_MIN, SHAPE_MAX = 0.2, 200.0
WIDTH_SPANS = 4.0
PENALTY = 1e6


class FitError(RuntimeError):
    pass


class ThresholdError(RuntimeError):
    pass


@dataclass(frozen=True)
class CurveFit:
    """rate(p) = p_max * I((p - p_lo) / width; a, b), argument clamped to [0, 1]."""

    p_max: float
    p_lo: float
    width: float
    a: float
    b: float
    residual_norm: float = 0.0
    iterations: int = 0

    def __call__(self, p):
        return beta_cdf_curve(p, self.p_max, self.p_lo, self.width, self.a, self.b)

    @property
    def params(self) -> tuple[float, ...]:
        return (self.p_max, self.p_lo, self.width, self.a, self.b)

    def to_dict(self) -> dict:
        out = dict(zip(PARAM_NAMES, self.params))
        out["residual_norm"] = self.residual_norm
        return out


def beta_cdf_curve(p, p_max, p_lo, width, a, b):
    x = np.clip((np.asarray(p, dtype=float) - p_lo) / width, 0.0, 1.0)
    return p_max * betainc(a, b, x)


def _unpack(z):
    return z[0], z[1], np.exp(z[2]), np.exp(z[3]), np.exp(z[4])


def fit_curve(p, rates, initial=None, max_restarts: int = 10) -> CurveFit:
    """Least-squares beta-CDF fit by Nelder-Mead simplex descent.

    The default starting point puts the rising edge across the sampled
    window: ``p_lo`` at the first point, width equal to the span, ``a = b = 2``
    and ``p_max`` at the largest observed rate.  The simplex is restarted from
    its own optimum until the objective stops improving.
    """
    p = np.asarray(p, dtype=float)
    rates = np.asarray(rates, dtype=float)
    if p.shape != rates.shape or p.ndim != 1:
        raise ValueError("p and rates must be 1-D arrays of equal length")
    if len(p) < 5:
        raise ValueError("need at least 5 points to fit a curve")
    if np.any(np.diff(p) <= 0):
        raise ValueError("grid must be strictly increasing")
    if rates.max() <= 0 or np.ptp(rates) <= 0:
        raise FitError("rates show no transition in the sampled window")

    if initial is None:
        initial = (min(rates.max(), 1.0), p[0], p[-1] - p[0], 2.0, 2.0)
    pm, lo, w, a, b = initial
    z = np.array([pm, lo, np.log(w), np.log(a), np.log(b)])
    span = p[-1] - p[0]

    def objective(z):
        pm, lo, w, a, b = _unpack(z)
        if not 0.0 < pm <= 1.0 or not (SHAPE_MIN < a < SHAPE_MAX and SHAPE_MIN < b < SHAPE_MAX):
            return PENALTY
        if w > WIDTH_SPANS * span or lo < p[0] - WIDTH_SPANS * span or lo > p[-1] or lo + w < p[0]:
            return PENALTY
        r = beta_cdf_curve(p, pm, lo, w, a, b) - rates
        return float(r @ r)

    best = objective(z)
    iterations = 0
    for _ in range(max_restarts):
        res = minimize(objective, z, method="Nelder-Mead",
                       options={"xatol": 1e-10, "fatol": 1e-15, "maxiter": 4000,
                                "maxfev": 8000, "adaptive": True})
        iterations += res.nit
        improved = res.fun < best - max(1e-15, 1e-9 * best)
        if res.fun <= best:
            z, best = res.x, res.fun
        if not improved:
            break
    if best >= PENALTY or not np.isfinite(best):
        raise FitError(f"simplex did not converge (objective {best:g})")
    return CurveFit(*_unpack(z), residual_norm=float(np.sqrt(best)), iterations=iterations)


def crossing(f, g, lo: float, hi: float, tol: float = 1e-10, samples: int = 4001):
    """Where ``f`` (smaller code) drops below ``g`` (larger code) inside [lo, hi].

    The window is scanned for a sign change of ``f - g``; positive-to-negative
    changes are preferred.  The bracket is refined by bisection.  Returns None
    when the curves do not cross.
    """
    xs = np.linspace(lo, hi, samples)
    diff = f(xs) - g(xs)
    sign = np.sign(np.where(np.abs(diff) < 1e-12, 0.0, diff))
    nz = np.flatnonzero(sign)
    if len(nz) < 2:
        return None
    changes = [(i, j) for i, j in zip(nz[:-1], nz[1:]) if sign[i] != sign[j]]
    if not changes:
        return None
    down = [c for c in changes if sign[c[0]] > 0]
    i, j = (down or changes)[0]
    a, b = xs[i], xs[j]
    fa = f(a) - g(a)
    while b - a > tol:
        mid = 0.5 * (a + b)
        fm = f(mid) - g(mid)
        if np.sign(fm) == np.sign(fa) and fm != 0:
            a, fa = mid, fm
        else:
            b = mid
    return 0.5 * (a + b)


def interpolated_crossing(p, rates_small, rates_large):
    """Crossing of two raw rate series by linear interpolation."""
    p = np.asarray(p, dtype=float)
    diff = np.asarray(rates_small, dtype=float) - np.asarray(rates_large, dtype=float)
    for i in range(len(p) - 1):
        if diff[i] > 0 >= diff[i + 1] or diff[i] >= 0 > diff[i + 1]:
            if diff[i] == diff[i + 1]:
                return float(p[i])
            return float(p[i] + (p[i + 1] - p[i]) * diff[i] / (diff[i] - diff[i + 1]))
    return None


@dataclass
class ThresholdEstimate:
    L: int | None
    fits: dict[int, CurveFit]
    crossings: dict[tuple[int, int], float | None]
    threshold: float
    stderr: float | None = None
    n_boot: int = 0
    hull: tuple[float, float] = (0.0, 1.0)
    method: str = "fit"
    boot_samples: list[float] = field(default_factory=list, repr=False)

    @property
    def missing_pairs(self) -> list[tuple[int, int]]:
        return [k for k, v in self.crossings.items() if v is None]

    def to_dict(self) -> dict:
        return {
            "L": self.L,
            "method": self.method,
            "threshold": self.threshold,
            "bootstrap_stderr": self.stderr,
            "bootstrap_resamples": self.n_boot,
            "hull": list(self.hull),
            "fits": {str(d): f.to_dict() for d, f in sorted(self.fits.items())},
            "crossings": [
                {"d_small": a, "d_large": b, "p": c} for (a, b), c in sorted(self.crossings.items())
            ],
            "missing_pairs": [list(k) for k in self.missing_pairs],
        }


def _threshold_from(fits: dict[int, CurveFit], hull):
    out = {}
    for da, db in itertools.combinations(sorted(fits), 2):
        out[(da, db)] = crossing(fits[da], fits[db], *hull)
    found = [c for c in out.values() if c is not None]
    if not found:
        raise ThresholdError("fitted curves do not cross inside the sampled window")
    return out, float(np.mean(found))


def find_threshold(fits: dict[int, CurveFit], hull, *, data=None, n_boot: int = 200,
                   seed: int = 0, L=None) -> ThresholdEstimate:
    """Mean of pairwise crossings of fitted curves, with a parametric bootstrap error.

    ``data`` maps each distance to ``(p, n_trials, n_failures)`` arrays.  Each
    bootstrap replicate redraws every point's failure count from a binomial at
    its observed rate, refits every curve and recomputes the threshold.
    """
    if len(fits) < 2:
        raise ValueError("need fitted curves for at least two distances")
    hull = (float(hull[0]), float(hull[1]))
    crossings, threshold = _threshold_from(fits, hull)
    est = ThresholdEstimate(L, dict(fits), crossings, threshold, hull=hull)
    if data is None or n_boot <= 0:
        return est

    rng = np.random.default_rng(seed)
    samples = []
    for _ in range(n_boot):
        refit = {}
        for d, (p, n, k) in sorted(data.items()):
            n = np.asarray(n)
            draw = rng.binomial(n, np.asarray(k) / n)
            try:
                refit[d] = fit_curve(p, draw / n, initial=fits[d].params, max_restarts=3)
            except FitError:
                pass
        if len(refit) < 2:
            continue
        try:
            samples.append(_threshold_from(refit, hull)[1])
        except ThresholdError:
            continue
    est.boot_samples = samples
    est.n_boot = len(samples)
    est.stderr = float(np.std(samples, ddof=1)) if len(samples) > 1 else None
    return est


def interpolation_threshold(data: dict[int, tuple], L=None) -> ThresholdEstimate:
    """Threshold from linear interpolation of raw rates, without curve fits."""
    crossings = {}
    for da, db in itertools.combinations(sorted(data), 2):
        p, n_a, k_a = data[da]
        _, n_b, k_b = data[db]
        crossings[(da, db)] = interpolated_crossing(
            p, np.asarray(k_a) / np.asarray(n_a), np.asarray(k_b) / np.asarray(n_b))
    found = [c for c in crossings.values() if c is not None]
    if not found:
        raise ThresholdError("raw rate curves do not cross")
    p = np.asarray(next(iter(data.values()))[0], dtype=float)
    return ThresholdEstimate(L, {}, crossings, float(np.mean(found)),
                             hull=(float(p[0]), float(p[-1])), method="interpolation")
