"""Seeded random substreams.

Every random quantity is drawn from a generator keyed by
``(master_seed, stage, sample_index)``, so results do not depend on the order
in which samples are evaluated or on how many workers evaluate them.
"""

from __future__ import annotations

import numpy as np

FLOW_STAGE = 0
LOAD_STAGE = 1
THRESHOLD_STAGE = 2

_HALF_ULP = 2.0**-54


def substream(master_seed: int, *keys: int) -> np.random.Generator:
    seq = np.random.SeedSequence(entropy=int(master_seed), spawn_key=tuple(int(k) for k in keys))
    return np.random.Generator(np.random.PCG64(seq))


def open_uniform(rng: np.random.Generator, size) -> np.ndarray:
    """Uniforms on the open interval (0, 1), safe to feed into quantile functions."""
    return rng.random(size) + _HALF_ULP
