"""Per-cycle power normalisation."""
from __future__ import annotations

import numpy as np


class DegenerateCycleError(ValueError):
    """Raised for power cycles that cannot be normalised."""


def normalize_cycle(powers) -> np.ndarray:
    """Divide each power by the cycle total.

    Accepts a single cycle of shape ``(N,)`` or a stack of cycles ``(S, N)``;
    normalisation is always along the last axis.
    """
    p = np.asarray(powers, dtype=np.float64)
    if p.ndim not in (1, 2) or p.shape[-1] == 0:
        raise DegenerateCycleError(f"expected shape (N,) or (S, N), got {p.shape}")
    if not np.all(np.isfinite(p)):
        raise DegenerateCycleError("power cycle contains non-finite values")
    if np.any(p < 0):
        raise DegenerateCycleError("power cycle contains negative values")
    total = p.sum(axis=-1, keepdims=True)
    if np.any(total <= 0):
        raise DegenerateCycleError("power cycle sums to zero")
    return p / total
