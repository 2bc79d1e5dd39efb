"""Counter-based random streams.

Every Monte Carlo trial draws from its own Philox stream whose key depends on
(master seed, point id) and whose counter starts at (trial index, sub-stream).
Results therefore do not depend on how trials are split across workers.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

PRIMAL_STREAM, DUAL_STREAM = 0, 1


def point_key(master_seed: int, point_id: Sequence[int] = ()) -> np.ndarray:
    seq = np.random.SeedSequence(int(master_seed), spawn_key=tuple(int(i) for i in point_id))
    return seq.generate_state(2, np.uint64)


def stream(key: np.ndarray, trial: int, sub: int = 0) -> np.random.Generator:
    # Philox increments the lowest counter word, so the high words are free
    # to label trials; a trial never draws 2**64 blocks.
    counter = np.array([0, 0, sub, trial], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key, counter=counter))


def trial_streams(master_seed: int, point_id: Sequence[int], trial: int):
    """Independent (primal, dual) generators for one trial."""
    key = point_key(master_seed, point_id)
    return stream(key, trial, PRIMAL_STREAM), stream(key, trial, DUAL_STREAM)
