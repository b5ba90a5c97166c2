"""Input-checking helpers shared by the estimators and the CLI."""

from __future__ import annotations

import numpy as np

from .errors import InsufficientDataError, RankError, ShapeMismatchError
from .qmatrix import QuaternionMatrix


def as_float_matrix(x, name: str = "X") -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 2:
        raise ShapeMismatchError(f"{name} must be 2-d, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def as_quaternion_matrix(x, name: str = "X") -> QuaternionMatrix:
    """Accept a QuaternionMatrix, an (m, n, 4) component array, or a real
    2-d array (promoted to real quaternions)."""
    if isinstance(x, QuaternionMatrix):
        return x
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 3 and arr.shape[2] == 4:
        return QuaternionMatrix.from_parts(arr[..., 0], arr[..., 1],
                                           arr[..., 2], arr[..., 3])
    if arr.ndim == 2:
        return QuaternionMatrix.from_real(arr)
    raise ShapeMismatchError(
        f"{name} must be a QuaternionMatrix, an (m, n, 4) component array, "
        f"or a real matrix, got shape {arr.shape}")


def check_paired_snapshots(x_cols: int, y_cols: int) -> None:
    if x_cols != y_cols:
        raise ShapeMismatchError(
            f"snapshot matrices must have equal column counts, got "
            f"{x_cols} and {y_cols}")


def require_min_snapshots(n_snapshots: int, minimum: int = 2) -> None:
    if n_snapshots < minimum:
        raise InsufficientDataError(
            f"need at least {minimum} snapshots, got {n_snapshots}")


def resolve_rank(requested, numerical_rank: int, default_cap: int) -> int:
    """Effective truncation rank.

    ``None`` means "as much as the data supports": the default cap (one less
    than the snapshot count) silently truncated to the numerical rank.  An
    explicit request outside [1, numerical_rank] is an error.
    """
    if requested is None:
        return min(default_cap, numerical_rank)
    r = int(requested)
    if r < 1:
        raise RankError(f"rank must be at least 1, got {r}")
    if r > numerical_rank:
        raise RankError(
            f"requested rank {r} exceeds the numerical rank {numerical_rank}")
    return r
