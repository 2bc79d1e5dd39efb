"""Photon loss with fiber delays, boosted fusion erasure and Shor-encoded fusion erasure."""

from __future__ import annotations

import math
from dataclasses import dataclass

P_FAIL = 0.25  # boosted type-II fusion with one ancillary Bell pair
BOOST_PHOTONS = 2
FIBER_DB_PER_KM = 0.2
FIBER_M_PER_NS = 0.2


@dataclass(frozen=True)
class NoiseParams:
    p_baseline: float
    p_clock: float = 0.0
    t_bin_ns: float = 1.0

    def __post_init__(self):
        for name in ("p_baseline", "p_clock"):
            value = getattr(self, name)
            if not 0.0 <= value < 1.0:
                raise ValueError(f"{name} must lie in [0, 1), got {value}")
        if self.t_bin_ns <= 0:
            raise ValueError("t_bin_ns must be positive")

    @classmethod
    def fiber(cls, p_baseline: float, db_per_km: float = FIBER_DB_PER_KM,
              t_bin_ns: float = 1.0) -> "NoiseParams":
        """Parameters for delays made of fiber with the given attenuation."""
        p_clock = per_bin_loss(db_per_km, FIBER_M_PER_NS * t_bin_ns)
        return cls(p_baseline, p_clock, t_bin_ns)


@dataclass(frozen=True)
class DirectionalErasure:
    """Encoded-fusion outcome erasure probability for x, y and z fusions."""

    p_x: float
    p_y: float
    p_z: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.p_x, self.p_y, self.p_z)

    @classmethod
    def uniform(cls, p: float) -> "DirectionalErasure":
        return cls(p, p, p)


def per_bin_loss(attenuation_db_per_km: float, fiber_m_per_bin: float) -> float:
    """Loss probability of one delay time bin of fiber."""
    if attenuation_db_per_km < 0:
        raise ValueError("attenuation must be non-negative")
    if fiber_m_per_bin <= 0:
        raise ValueError("fiber length per bin must be positive")
    db_per_bin = attenuation_db_per_km * fiber_m_per_bin / 1000.0
    # 1 - 10**(-dB/10), without cancellation for tiny dB
    return -math.expm1(-db_per_bin * math.log(10.0) / 10.0)


def delay_loss(p_clock: float, n_bins: int) -> float:
    """Loss accumulated over ``n_bins`` bins of delay, excluding baseline loss."""
    return qubit_loss(NoiseParams(0.0, p_clock), n_bins)


def qubit_loss(params: NoiseParams, n_bins: int) -> float:
    if n_bins < 0:
        raise ValueError("number of bins must be non-negative")
    return 1.0 - (1.0 - params.p_baseline) * (1.0 - params.p_clock) ** n_bins


def physical_fusion_erasure(params: NoiseParams, n_bins: int) -> float:
    """Erasure probability of each outcome of a boosted fusion.

    One input photon has been delayed for ``n_bins`` bins; the other input
    and the two boosting photons only see baseline loss.  Without loss an
    outcome is erased with probability p_fail / 2.
    """
    if n_bins < 0:
        raise ValueError("number of bins must be non-negative")
    survive = (1.0 - params.p_clock) ** n_bins * (1.0 - params.p_baseline) ** (2 + BOOST_PHOTONS)
    return 1.0 - (1.0 - P_FAIL / 2.0) * survive


def encoded_fusion_erasure(p0: float) -> float:
    """Average outcome erasure of a transversal fusion of 4-qubit Shor-encoded qubits.

    The two code variants (X repetition above Z and the reverse) are chosen at
    random per site, so the two outcome erasure rates are averaged.
    """
    if not 0.0 <= p0 <= 1.0:
        raise ValueError(f"p0 must lie in [0, 1], got {p0}")
    both_pairs_hit = (1.0 - (1.0 - p0) ** 2) ** 2
    one_pair_lost = 1.0 - (1.0 - p0 * p0) ** 2
    return (both_pairs_hit + one_pair_lost) / 2.0


def directional_erasure(params: NoiseParams, L: int) -> DirectionalErasure:
    """Erasure probabilities when x, y, z fusions wait 1, L and L^2 bins."""
    if L < 1:
        raise ValueError("rastering length must be >= 1")
    return DirectionalErasure(
        *(encoded_fusion_erasure(physical_fusion_erasure(params, n)) for n in (1, L, L * L))
    )


def noise_table(params: NoiseParams, bins: list[int]) -> list[dict]:
    """Rows of (N, delay loss, p0, p_enc) for a list of delay lengths."""
    rows = []
    for n in bins:
        p0 = physical_fusion_erasure(params, n)
        rows.append({
            "N": n,
            "delay_loss": delay_loss(params.p_clock, n),
            "qubit_loss": qubit_loss(params, n),
            "p0": p0,
            "p_enc": encoded_fusion_erasure(p0),
        })
    return rows
