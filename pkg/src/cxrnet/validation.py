"""Input validation helpers for the estimator API."""

from __future__ import annotations

import numpy as np

from .exceptions import PixelRangeError, ShapeMismatchError


def check_images(X, expected_shape: tuple[int, int, int] | None = None) -> np.ndarray:
    """Validate a batch of images: 4-D [N, H, W, C], finite, values in [0, 1]."""
    X = np.asarray(X)
    if X.ndim != 4:
        raise ShapeMismatchError(f"expected images shaped [N, H, W, C], got {X.shape}")
    if expected_shape is not None and X.shape[1:] != tuple(expected_shape):
        raise ShapeMismatchError(
            f"images shaped {X.shape[1:]} do not match expected {tuple(expected_shape)}"
        )
    if not np.issubdtype(X.dtype, np.floating):
        X = X.astype(np.float32)
    if not np.all(np.isfinite(X)):
        raise ValueError("images contain non-finite values")
    if X.size and (X.min() < 0 or X.max() > 1):
        raise PixelRangeError(
            f"pixel values outside [0, 1]: min={X.min():.4g}, max={X.max():.4g}; "
            "normalize images before fitting"
        )
    return X


def check_labels(y, num_classes: int, n_samples: int | None = None) -> np.ndarray:
    """Validate an integer label vector against the class count."""
    y = np.asarray(y)
    if y.ndim != 1:
        raise ShapeMismatchError(f"expected labels shaped [N], got {y.shape}")
    if n_samples is not None and y.shape[0] != n_samples:
        raise ShapeMismatchError(f"{y.shape[0]} labels for {n_samples} images")
    if not np.issubdtype(y.dtype, np.integer):
        rounded = np.rint(np.asarray(y, dtype=np.float64))
        if y.size and np.any(rounded != np.asarray(y, dtype=np.float64)):
            raise ValueError("labels must be integers")
        y = rounded.astype(np.int64)
    if y.size and (y.min() < 0 or y.max() >= num_classes):
        raise ValueError(f"labels must lie in [0, {num_classes})")
    return y.astype(np.int64)
