"""Input validation helpers (array coercion, shape and finiteness checks)."""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatchError, MatrixTooLargeError

MAX_DIM = 256


def check_matrix(m, name: str = "matrix", square: bool = False) -> np.ndarray:
    """Return ``m`` as a finite complex128 2-D array."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise DimensionMismatchError(f"{name} must be 2-D, got shape {a.shape}")
    if max(a.shape, default=0) > MAX_DIM:
        raise MatrixTooLargeError(
            f"{name} has shape {a.shape}; sizes above {MAX_DIM} are not supported"
        )
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains NaN or Inf")
    if square and a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"{name} must be square, got shape {a.shape}")
    return a


def check_vector(v, dim: int | None = None, name: str = "vector") -> np.ndarray:
    a = np.asarray(v, dtype=np.complex128)
    if a.ndim != 1:
        raise DimensionMismatchError(f"{name} must be 1-D, got shape {a.shape}")
    if dim is not None and a.shape[0] != dim:
        raise DimensionMismatchError(f"{name} has length {a.shape[0]}, expected {dim}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains NaN or Inf")
    return a


def check_same_shape(a: np.ndarray, b: np.ndarray, names=("a", "b")) -> None:
    if a.shape != b.shape:
        raise DimensionMismatchError(
            f"{names[0]} has shape {a.shape} but {names[1]} has shape {b.shape}"
        )
