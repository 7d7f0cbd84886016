"""Seeded substreams: one independent generator per (seed, index path)."""

from __future__ import annotations

import numpy as np


def substream(seed: int, *index: int) -> np.random.Generator:
    """Generator for substream ``index`` of master ``seed``.

    The stream depends only on ``(seed, index)``, so trials can run in any
    order (or in parallel) and still reproduce.
    """
    ss = np.random.SeedSequence(entropy=int(seed) % 2**64, spawn_key=tuple(int(i) for i in index))
    return np.random.default_rng(ss)


def nonzero_int_vector(rng: np.random.Generator, size: int, low: int = -10, high: int = 10) -> list[int]:
    """Uniform integer vector in ``[low, high]^size``, rejecting all-zero draws."""
    while True:
        v = rng.integers(low, high + 1, size=size)
        if v.any():
            return [int(x) for x in v]


def complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def derive_seed(seed: int, *index: int) -> int:
    """A 63-bit integer seed for substream ``index`` of ``seed``."""
    ss = np.random.SeedSequence(entropy=int(seed) % 2**64, spawn_key=tuple(int(i) for i in index))
    return int(ss.generate_state(1, dtype=np.uint64)[0] >> 1)
