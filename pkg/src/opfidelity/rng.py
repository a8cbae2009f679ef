"""Seeded random sources.

All randomness flows from numpy's PCG64 bit generator keyed by a
:class:`numpy.random.SeedSequence`, so a given ``(seed, keys...)`` produces the
same stream on every platform. Complex Gaussians are drawn with the
Box-Muller transform from the generator's uniform doubles rather than through
numpy's normal sampler, which keeps the mapping from bits to numbers explicit.
"""
from __future__ import annotations

import numpy as np


def _seed_sequence(seed: int, keys: tuple[int, ...] = ()) -> np.random.SeedSequence:
    seed = int(seed)
    if seed < 0:
        seed &= (1 << 64) - 1
    return np.random.SeedSequence(seed, spawn_key=tuple(int(k) for k in keys))


def generator(seed: int, *keys: int) -> np.random.Generator:
    """Independent stream for ``seed`` split by the integer path ``keys``."""
    return np.random.Generator(np.random.PCG64(_seed_sequence(seed, keys)))


def derive_seed(seed: int, *keys: int) -> int:
    """A 64-bit seed for the child stream ``keys`` of ``seed``."""
    state = _seed_sequence(seed, keys).generate_state(1, dtype=np.uint64)
    return int(state[0])


def complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    """Array of i.i.d. complex normals with independent N(0, 1) real and imaginary parts."""
    shape = tuple(np.atleast_1d(shape)) if not isinstance(shape, tuple) else shape
    n = int(np.prod(shape))
    # 1 - U maps [0, 1) onto (0, 1], keeping log finite
    u1 = 1.0 - rng.random(n)
    u2 = rng.random(n)
    radius = np.sqrt(-2.0 * np.log(u1))
    angle = 2.0 * np.pi * u2
    return (radius * np.cos(angle) + 1j * radius * np.sin(angle)).reshape(shape)
