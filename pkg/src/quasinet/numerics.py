"""Seeded randomness and the small numeric helpers shared by every module.

Everything is 64-bit float. The RNG is numpy's PCG64 behind a thin
wrapper so experiment code never touches global numpy state; streams for
independent runs are spawned from independent seeds and never share state.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit


class RngState:
    """Single-owner seeded generator. Same seed => bitwise-same samples."""

    def __init__(self, seed: int):
        if seed < 0:
            raise ValueError(f"seed must be non-negative, got {seed}")
        self.seed = seed
        self._gen = np.random.default_rng(seed)

    def gaussian(self, mean: float = 0.0, std: float = 1.0) -> float:
        if std < 0:
            raise ValueError(f"std must be >= 0, got {std}")
        if std == 0.0:
            return float(mean)
        return float(self._gen.normal(mean, std))

    def gaussian_matrix(self, rows: int, cols: int, mean: float, std: float) -> np.ndarray:
        if std < 0:
            raise ValueError(f"std must be >= 0, got {std}")
        return self._gen.normal(mean, std, size=(rows, cols))

    def permutation(self, n: int) -> np.ndarray:
        return self._gen.permutation(n)

    def spawn(self) -> "RngState":
        """Independent child stream (for parallel sub-tasks)."""
        child = RngState.__new__(RngState)
        child.seed = self.seed
        child._gen = self._gen.spawn(1)[0]
        return child

    @property
    def generator(self) -> np.random.Generator:
        return self._gen


def gaussian(rng: RngState, mean: float, std: float) -> float:
    return rng.gaussian(mean, std)


def matvec(M: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Plain dense matrix-vector product with an explicit shape check."""
    M = np.asarray(M, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    if M.ndim != 2 or x.ndim != 1 or M.shape[1] != x.shape[0]:
        raise ValueError(f"shape mismatch: matrix {M.shape} vs vector {x.shape}")
    return M @ x


@njit(cache=True)
def logistic(x: float) -> float:
    """Numerically stable logistic; saturates cleanly at 0 and 1."""
    if x >= 0.0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def as_vector(x) -> np.ndarray:
    v = np.asarray(x, dtype=np.float64)
    if v.ndim != 1:
        raise ValueError(f"expected 1-d vector, got shape {v.shape}")
    return v
