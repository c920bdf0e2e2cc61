"""Input validation helpers shared by the estimators."""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np


def as_vector(value, dimension: int | None = None) -> np.ndarray:
    """Coerce to a finite 1-D float64 array, optionally checking its length."""
    v = np.asarray(value, dtype=np.float64)
    if v.ndim != 1:
        raise ValueError(f"expected a 1-D vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector contains non-finite components")
    if dimension is not None and v.shape[0] != dimension:
        raise ValueError(f"expected dimension {dimension}, got {v.shape[0]}")
    return v


def check_same_dimension(u: np.ndarray, v: np.ndarray) -> None:
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")


def check_texts(X: Iterable) -> list[str]:
    """Validate a collection of raw text documents."""
    texts = list(X)
    for i, t in enumerate(texts):
        if not isinstance(t, str):
            raise TypeError(f"expected str at position {i}, got {type(t).__name__}")
    return texts


def check_unit_interval(value: float, name: str) -> float:
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value}")
    return float(value)


def check_matching_lengths(X: Sequence, y: Sequence) -> None:
    if len(X) != len(y):
        raise ValueError(f"X and y length mismatch: {len(X)} vs {len(y)}")
