"""Seeded residue streams with a fixed, version-stable algorithm.

The generator is numpy's PCG64 bit generator seeded through SeedSequence;
both are covered by numpy's stream-compatibility policy.  Raw 64-bit words
are mapped to [0, p) by rejection sampling done here rather than by numpy's
``Generator.integers``, whose mapping is allowed to change between releases.
"""

from __future__ import annotations

import numpy as np

PRNG_ID = "pcg64-seedsequence/u64-rejection-v1"

_TWO64 = 1 << 64


class ResidueStream:
    """Deterministic stream of uniform residues modulo a prime."""

    def __init__(self, seed: int) -> None:
        if seed < 0:
            raise ValueError("seed must be a non-negative integer")
        self.seed = seed
        self._bits = np.random.PCG64(seed)

    def residues(self, count: int, p: int) -> np.ndarray:
        """Return ``count`` uniform values in [0, p) as an int64 array."""
        limit = _TWO64 - (_TWO64 % p)
        out = np.empty(count, dtype=np.int64)
        filled = 0
        while filled < count:
            raw = self._bits.random_raw(count - filled).astype(np.uint64)
            if limit < _TWO64:
                raw = raw[raw < np.uint64(limit)]
            vals = (raw % np.uint64(p)).astype(np.int64)
            out[filled:filled + vals.size] = vals
            filled += vals.size
        return out

    def integers(self, count: int, low: int, high: int) -> np.ndarray:
        """Uniform integers in the closed range [low, high]."""
        return self.residues(count, high - low + 1) + low
