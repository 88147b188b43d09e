"""Layer implementations: forward passes and analytic backward passes.

Activations flow as float arrays shaped [N, H, W, C]; dense layers take
[N, features]. During a training forward pass each layer caches whatever its
backward pass needs; backward returns the gradient w.r.t. the layer input and
stores parameter gradients on the layer (`weight_grad` / `bias_grad`).
Parameter updates are the optimizer's job, not the layer's.
"""

from __future__ import annotations

import math

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from . import tensor
from .exceptions import ShapeMismatchError, TooSmallInputError


def he_uniform(rng: np.random.Generator, shape, fan_in: int, dtype) -> np.ndarray:
    """He-uniform init: uniform in +-sqrt(6 / fan_in)."""
    bound = math.sqrt(6.0 / fan_in)
    return rng.uniform(-bound, bound, size=shape).astype(dtype)


def softmax(logits: np.ndarray) -> np.ndarray:
    """Row-wise softmax of an [N, K] array, stabilized by max subtraction."""
    logits = np.asarray(logits)
    if logits.ndim != 2 or logits.shape[1] < 1:
        raise ShapeMismatchError(f"softmax expects [N, K] logits, got {logits.shape}")
    shifted = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def _im2col(x_padded: np.ndarray, kernel_h: int, kernel_w: int, stride: int) -> np.ndarray:
    """Unroll [N, Hp, Wp, C] into patch rows [N*H'*W', kh*kw*C].

    Patch elements are flattened in (kh, kw, C) row-major order so that the
    columns line up with weights reshaped from [kh, kw, C, F] to [kh*kw*C, F].
    """
    n = x_padded.shape[0]
    win = sliding_window_view(x_padded, (kernel_h, kernel_w), axis=(1, 2))
    win = win[:, ::stride, ::stride]  # (N, H', W', C, kh, kw)
    out_h, out_w = win.shape[1], win.shape[2]
    cols = win.transpose(0, 1, 2, 4, 5, 3).reshape(
        n * out_h * out_w, kernel_h * kernel_w * x_padded.shape[3]
    )
    return cols


class ConvLayer:
    """2D convolution over NHWC inputs, computed as im2col + matmul."""

    def __init__(
        self,
        in_channels: int,
        filters: int,
        kernel_h: int = 3,
        kernel_w: int = 3,
        stride: int = 1,
        padding: int = 0,
        *,
        rng: np.random.Generator | None = None,
        dtype=tensor.DEFAULT_DTYPE,
    ):
        if min(in_channels, filters, kernel_h, kernel_w, stride) < 1 or padding < 0:
            raise ValueError("conv hyperparameters must be >= 1 (padding >= 0)")
        self.in_channels = in_channels
        self.filters = filters
        self.kernel_h = kernel_h
        self.kernel_w = kernel_w
        self.stride = stride
        self.padding = padding
        if rng is None:
            rng = np.random.default_rng(0)
        fan_in = kernel_h * kernel_w * in_channels
        self.weights = he_uniform(rng, (kernel_h, kernel_w, in_channels, filters), fan_in, dtype)
        self.bias = np.zeros(filters, dtype=dtype)
        self.weight_grad: np.ndarray | None = None
        self.bias_grad: np.ndarray | None = None
        self._cols: np.ndarray | None = None
        self._input_shape: tuple | None = None

    def output_hw(self, h: int, w: int) -> tuple[int, int]:
        out_h = (h + 2 * self.padding - self.kernel_h) // self.stride + 1
        out_w = (w + 2 * self.padding - self.kernel_w) // self.stride + 1
        if out_h < 1 or out_w < 1:
            raise TooSmallInputError(
                f"input {h}x{w} too small for kernel "
                f"{self.kernel_h}x{self.kernel_w}/stride {self.stride}/padding {self.padding}"
            )
        return out_h, out_w

    def _pad(self, x: np.ndarray) -> np.ndarray:
        if self.padding == 0:
            return x
        p = self.padding
        return np.pad(x, ((0, 0), (p, p), (p, p), (0, 0)))

    def forward(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x)
        if x.ndim != 4:
            raise ShapeMismatchError(f"conv expects [N, H, W, C] input, got {x.shape}")
        n, h, w, c = x.shape
        if c != self.in_channels:
            raise ShapeMismatchError(
                f"channel mismatch: input has {c} channels, layer expects {self.in_channels}"
            )
        out_h, out_w = self.output_hw(h, w)
        cols = _im2col(self._pad(x), self.kernel_h, self.kernel_w, self.stride)
        out = cols @ self.weights.reshape(-1, self.filters) + self.bias
        self._cols = cols
        self._input_shape = x.shape
        return out.reshape(n, out_h, out_w, self.filters)

    def backward(self, grad: np.ndarray) -> np.ndarray:
        if self._cols is None:
            raise RuntimeError("backward called before forward")
        grad = np.asarray(grad)
        n, h, w, c = self._input_shape
        out_h, out_w = self.output_hw(h, w)
        if grad.shape != (n, out_h, out_w, self.filters):
            raise ShapeMismatchError(
                f"upstream gradient shape {grad.shape} does not match "
                f"forward output {(n, out_h, out_w, self.filters)}"
            )
        g2 = grad.reshape(-1, self.filters)
        self.bias_grad = g2.sum(axis=0)
        self.weight_grad = (self._cols.T @ g2).reshape(self.weights.shape)

        dcols = g2 @ self.weights.reshape(-1, self.filters).T
        kh, kw, s, p = self.kernel_h, self.kernel_w, self.stride, self.padding
        dcols = dcols.reshape(n, out_h, out_w, kh, kw, c)
        dx = np.zeros((n, h + 2 * p, w + 2 * p, c), dtype=grad.dtype)
        for a in range(kh):
            for b in range(kw):
                dx[:, a : a + s * out_h : s, b : b + s * out_w : s, :] += dcols[:, :, :, a, b, :]
        if p:
            dx = dx[:, p : p + h, p : p + w, :]
        return dx


def conv2d_forward_direct(layer: ConvLayer, x: np.ndarray) -> np.ndarray:
    """Reference convolution evaluating the window product-sum per output element.

    Deliberately naive (per-element loops); kept as the independent
    counterpart to the im2col fast path in ConvLayer.forward.
    """
    x = np.asarray(x)
    n, h, w, c = x.shape
    if c != layer.in_channels:
        raise ShapeMismatchError(
            f"channel mismatch: input has {c} channels, layer expects {layer.in_channels}"
        )
    out_h, out_w = layer.output_hw(h, w)
    xp = layer._pad(x).astype(np.float64)
    wgt = layer.weights.astype(np.float64)
    s, kh, kw = layer.stride, layer.kernel_h, layer.kernel_w
    out = np.empty((n, out_h, out_w, layer.filters), dtype=np.float64)
    for ni in range(n):
        for i in range(out_h):
            for j in range(out_w):
                window = xp[ni, i * s : i * s + kh, j * s : j * s + kw, :]
                for f in range(layer.filters):
                    out[ni, i, j, f] = float(layer.bias[f]) + float(
                        np.sum(window * wgt[:, :, :, f])
                    )
    return out.astype(x.dtype)


class MaxPoolLayer:
    """Max pooling per channel; ties resolve to the first element in row-major window order."""

    def __init__(self, window_h: int = 2, window_w: int = 2, stride: int = 2):
        if min(window_h, window_w, stride) < 1:
            raise ValueError("pool window and stride must be >= 1")
        self.window_h = window_h
        self.window_w = window_w
        self.stride = stride
        self._argmax: np.ndarray | None = None
        self._input_shape: tuple | None = None

    def output_hw(self, h: int, w: int) -> tuple[int, int]:
        out_h = (h - self.window_h) // self.stride + 1
        out_w = (w - self.window_w) // self.stride + 1
        if out_h < 1 or out_w < 1:
            raise TooSmallInputError(
                f"input {h}x{w} too small for pool window {self.window_h}x{self.window_w}"
            )
        return out_h, out_w

    def forward(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x)
        if x.ndim != 4:
            raise ShapeMismatchError(f"pool expects [N, H, W, C] input, got {x.shape}")
        n, h, w, c = x.shape
        out_h, out_w = self.output_hw(h, w)
        win = sliding_window_view(x, (self.window_h, self.window_w), axis=(1, 2))
        win = win[:, :: self.stride, :: self.stride]  # (N, H', W', C, wh, ww)
        flat = win.reshape(n, out_h, out_w, c, self.window_h * self.window_w)
        idx = flat.argmax(axis=-1)  # first occurrence wins ties
        out = np.take_along_axis(flat, idx[..., None], axis=-1)[..., 0]
        self._argmax = idx
        self._input_shape = x.shape
        return out

    def backward(self, grad: np.ndarray) -> np.ndarray:
        if self._argmax is None:
            raise RuntimeError("backward called before forward")
        grad = np.asarray(grad)
        if grad.shape != self._argmax.shape:
            raise ShapeMismatchError(
                f"upstream gradient shape {grad.shape} does not match "
                f"forward output {self._argmax.shape}"
            )
        n, h, w, c = self._input_shape
        out_h, out_w = grad.shape[1], grad.shape[2]
        ni, oi, oj, ci = np.indices((n, out_h, out_w, c), sparse=True)
        rows = oi * self.stride + self._argmax // self.window_w
        cols = oj * self.stride + self._argmax % self.window_w
        dx = np.zeros((n, h, w, c), dtype=grad.dtype)
        np.add.at(dx, (ni, rows, cols, ci), grad)
        return dx


class ReLULayer:
    """max(0, x); the derivative at exactly 0 is taken as 0."""

    def __init__(self):
        self._mask: np.ndarray | None = None

    def forward(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x)
        self._mask = x > 0
        return np.maximum(x, 0)

    def backward(self, grad: np.ndarray) -> np.ndarray:
        if self._mask is None:
            raise RuntimeError("backward called before forward")
        grad = np.asarray(grad)
        if grad.shape != self._mask.shape:
            raise ShapeMismatchError(
                f"upstream gradient shape {grad.shape} does not match input {self._mask.shape}"
            )
        return grad * self._mask


class FlattenLayer:
    """Collapse [N, H, W, C] feature maps into [N, H*W*C] vectors."""

    def __init__(self):
        self._input_shape: tuple | None = None

    def forward(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x)
        self._input_shape = x.shape
        return tensor.reshape(x, (x.shape[0], math.prod(x.shape[1:])))

    def backward(self, grad: np.ndarray) -> np.ndarray:
        if self._input_shape is None:
            raise RuntimeError("backward called before forward")
        return tensor.reshape(grad, self._input_shape)


class DenseLayer:
    """Fully connected layer: out = x @ W + b."""

    def __init__(
        self,
        in_units: int,
        out_units: int,
        *,
        rng: np.random.Generator | None = None,
        dtype=tensor.DEFAULT_DTYPE,
    ):
        if in_units < 1 or out_units < 1:
            raise ValueError("dense layer unit counts must be >= 1")
        self.in_units = in_units
        self.out_units = out_units
        if rng is None:
            rng = np.random.default_rng(0)
        self.weights = he_uniform(rng, (in_units, out_units), in_units, dtype)
        self.bias = np.zeros(out_units, dtype=dtype)
        self.weight_grad: np.ndarray | None = None
        self.bias_grad: np.ndarray | None = None
        self._input: np.ndarray | None = None

    def forward(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x)
        if x.ndim != 2 or x.shape[1] != self.in_units:
            raise ShapeMismatchError(
                f"dense expects [N, {self.in_units}] input, got {x.shape}"
            )
        self._input = x
        return tensor.matmul(x, self.weights) + self.bias

    def backward(self, grad: np.ndarray) -> np.ndarray:
        if self._input is None:
            raise RuntimeError("backward called before forward")
        grad = np.asarray(grad)
        if grad.shape != (self._input.shape[0], self.out_units):
            raise ShapeMismatchError(
                f"upstream gradient shape {grad.shape} does not match "
                f"output [{self._input.shape[0]}, {self.out_units}]"
            )
        self.weight_grad = self._input.T @ grad
        self.bias_grad = grad.sum(axis=0)
        return grad @ self.weights.T


class SoftmaxLayer:
    """Row-wise softmax as the model's output layer."""

    def __init__(self):
        self._output: np.ndarray | None = None

    def forward(self, x: np.ndarray) -> np.ndarray:
        self._output = softmax(x)
        return self._output

    def backward(self, grad: np.ndarray) -> np.ndarray:
        # Jacobian-vector product: dL/dx = p * (g - sum(g * p)). Training uses
        # the fused softmax+cross-entropy gradient instead of this path.
        if self._output is None:
            raise RuntimeError("backward called before forward")
        grad = np.asarray(grad)
        if grad.shape != self._output.shape:
            raise ShapeMismatchError(
                f"upstream gradient shape {grad.shape} does not match output {self._output.shape}"
            )
        p = self._output
        return p * (grad - (grad * p).sum(axis=1, keepdims=True))
