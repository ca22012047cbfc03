"""Seedable counter-based random streams.

Every stochastic routine in this package takes an explicit
``numpy.random.Generator``.  Streams are derived from a master seed and an
integer path with :func:`stream_rng`, built on the counter-based Philox
engine, so results are reproducible regardless of scheduling or worker
count: the stream for ``(seed, 3, 17)`` is always the same generator no
matter which process asks for it.
"""

import numpy as np


def stream_rng(seed: int, *path: int) -> np.random.Generator:
    """Return an independent generator for the stream ``(seed, *path)``.

    Distinct paths yield statistically independent streams (numpy
    ``SeedSequence`` spawn keys feeding a Philox counter engine).
    """
    ss = np.random.SeedSequence(seed, spawn_key=tuple(path))
    return np.random.Generator(np.random.Philox(ss))


def randbelow(rng: np.random.Generator, bound: int) -> int:
    """Exact uniform integer in [0, bound) for arbitrary-precision bounds.

    Rejection sampling on k-bit draws, k = bound.bit_length(), so the result
    is exactly uniform (no float rounding). Used by the constant-weight
    sphere sampler where the counts exceed 2**64.
    """
    if bound <= 0:
        raise ValueError("bound must be positive")
    k = int(bound).bit_length()
    words = (k + 31) // 32
    mask = (1 << k) - 1
    while True:
        draw = 0
        for w in rng.integers(0, 1 << 32, size=words, dtype=np.uint64):
            draw = (draw << 32) | int(w)
        draw &= mask
        if draw < bound:
            return draw
