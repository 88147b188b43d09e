"""Dense array helpers used by every other module.

Arrays are numpy ndarrays in row-major (C) order; images and feature maps
follow the batch-first N x H x W x C axis convention. float32 is the working
precision, float64 is selected by the gradient-checking tests. Broadcasting
is limited to the tensor-scalar case.
"""

from __future__ import annotations

import math

import numpy as np

from .exceptions import EmptyTensorError, ShapeMismatchError

DEFAULT_DTYPE = np.float32


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product of two rank-2 arrays."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or b.ndim != 2:
        raise ShapeMismatchError(
            f"matmul expects rank-2 operands, got shapes {a.shape} and {b.shape}"
        )
    if a.shape[1] != b.shape[0]:
        raise ShapeMismatchError(
            f"matmul inner dimensions differ: {a.shape} x {b.shape}"
        )
    return a @ b


def reshape(t: np.ndarray, new_shape) -> np.ndarray:
    """Reinterpret `t` under `new_shape`, preserving row-major element order."""
    t = np.asarray(t)
    new_shape = tuple(int(d) for d in np.atleast_1d(new_shape))
    if math.prod(new_shape) != t.size:
        raise ShapeMismatchError(
            f"cannot reshape {t.size} elements (shape {t.shape}) into {new_shape}"
        )
    return t.reshape(new_shape)


def argmax(t: np.ndarray) -> int:
    """Index of the maximum element of a rank-1 array; ties go to the lowest index."""
    t = np.asarray(t)
    if t.ndim != 1:
        raise ShapeMismatchError(f"argmax expects a rank-1 tensor, got shape {t.shape}")
    if t.size == 0:
        raise EmptyTensorError("argmax of an empty tensor")
    return int(np.argmax(t))


def _check_same_shape(a: np.ndarray, b: np.ndarray, op: str) -> None:
    if a.shape != b.shape:
        raise ShapeMismatchError(f"{op} operand shapes differ: {a.shape} vs {b.shape}")


def add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    b = np.asarray(b)
    _check_same_shape(a, b, "add")
    return a + b


def subtract(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    b = np.asarray(b)
    _check_same_shape(a, b, "subtract")
    return a - b


def multiply(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    b = np.asarray(b)
    _check_same_shape(a, b, "multiply")
    return a * b


def scale(t: np.ndarray, scalar: float) -> np.ndarray:
    return np.asarray(t) * float(scalar)
