"""Input validation helpers shared by the library, the estimators and the CLI."""

from __future__ import annotations

import numpy as np


class DimensionError(ValueError):
    """Raised when operands have incompatible shapes."""


def check_matrix(a, *, name: str = "matrix") -> np.ndarray:
    """Return ``a`` as a finite square complex128 array.

    Scalars and 1x1 inputs are accepted (the degenerate dim=1 case).
    """
    arr = np.asarray(a, dtype=np.complex128)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {arr.shape}")
    if arr.shape[0] == 0:
        raise DimensionError(f"{name} must have dim >= 1")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def check_same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape} vs {b.shape}")


def check_matrix_batch(X, *, name: str = "X") -> list[np.ndarray]:
    """Validate a batch of square matrices.

    Accepts a 3-D array ``(n_samples, d, d)`` or a sequence of square
    matrices of possibly different dimensions.
    """
    if isinstance(X, np.ndarray) and X.ndim == 3:
        return [check_matrix(m, name=f"{name}[{i}]") for i, m in enumerate(X)]
    if isinstance(X, np.ndarray) and X.ndim == 2:
        raise DimensionError(
            f"{name} must be a batch of matrices; wrap a single matrix as [m]"
        )
    try:
        items = list(X)
    except TypeError:
        raise TypeError(f"{name} must be an iterable of square matrices") from None
    if not items:
        raise ValueError(f"{name} is empty")
    return [check_matrix(m, name=f"{name}[{i}]") for i, m in enumerate(items)]


def check_positive_int(value, name: str, minimum: int = 1) -> int:
    if isinstance(value, bool) or int(value) != value or value < minimum:
        raise ValueError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)
