"""Reproducible per-trial random streams.

Trial ``i`` of an experiment seeded with ``master`` draws from a Philox
stream keyed by ``SeedSequence(master, spawn_key=(i,))``, so trials can be
computed in any order or process and still agree bit for bit.
"""

from __future__ import annotations

import os

import numpy as np

SEED_ENV = "WREATHWALK_SEED"
FALLBACK_SEED = 20240601


def trial_rng(master_seed: int, trial: int) -> np.random.Generator:
    seq = np.random.SeedSequence(int(master_seed) & (2**64 - 1), spawn_key=(int(trial),))
    return np.random.Generator(np.random.Philox(seq))


def default_seed() -> int:
    value = os.environ.get(SEED_ENV)
    return int(value) if value else FALLBACK_SEED
