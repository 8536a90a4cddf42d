"""Seeded random streams shared by every stochastic component.

All randomness in the package flows through PCG64 generators derived from a
(seed, path...) tuple via numpy's SeedSequence. A fixed path tag per call
site keeps the streams of independent components independent, so base
learners can be fitted in any order (or concurrently) with identical results.
"""

from __future__ import annotations

import numpy as np

# Stream tags; unique per call site so no two components share a substream.
STREAM_SPLIT = 1
STREAM_SYNTH = 2
STREAM_BAGGED = 3
STREAM_ADABOOST = 4
STREAM_STACKING_FOLDS = 5
STREAM_STACKING_BASE = 6
STREAM_VOTING_BASE = 7


def substream(seed: int, *path: int) -> np.random.Generator:
    """Return the PCG64 generator identified by (seed, *path)."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), *map(int, path)])))


def child_seed(seed: int, *path: int) -> int:
    """Derive an integer seed for a nested component from (seed, *path)."""
    return int(np.random.SeedSequence([int(seed), *map(int, path)]).generate_state(1)[0])
