"""Model assembly: the two-conv-stage classifier and its forward pass."""

from __future__ import annotations

import math

import numpy as np

from . import tensor
from .dataset import CLASS_NAMES
from .exceptions import EmptyTensorError, ShapeMismatchError
from .layers import (
    ConvLayer,
    DenseLayer,
    FlattenLayer,
    MaxPoolLayer,
    ReLULayer,
    SoftmaxLayer,
)

DEFAULT_INPUT_SHAPE = (300, 300, 3)

Layer = ConvLayer | MaxPoolLayer | ReLULayer | FlattenLayer | DenseLayer | SoftmaxLayer


class Model:
    """Ordered layer stack mapping [N, H, W, C] image batches to class probabilities.

    Layer shape composition is validated at construction; `layer_output_shapes`
    records the per-layer output shapes (sans batch axis).
    """

    def __init__(
        self,
        layers: list[Layer],
        input_shape: tuple[int, int, int],
        class_labels: tuple[str, ...] = CLASS_NAMES,
        dtype=tensor.DEFAULT_DTYPE,
    ):
        self.layers = list(layers)
        self.input_shape = tuple(int(d) for d in input_shape)
        self.class_labels = tuple(class_labels)
        self.dtype = np.dtype(dtype)
        self.layer_output_shapes = self._validate_composition()

    def _validate_composition(self) -> list[tuple[int, ...]]:
        shape: tuple[int, ...] = self.input_shape
        shapes = []
        for layer in self.layers:
            if isinstance(layer, ConvLayer):
                if len(shape) != 3 or shape[2] != layer.in_channels:
                    raise ShapeMismatchError(
                        f"conv layer expects [H, W, {layer.in_channels}], got {shape}"
                    )
                oh, ow = layer.output_hw(shape[0], shape[1])
                shape = (oh, ow, layer.filters)
            elif isinstance(layer, MaxPoolLayer):
                if len(shape) != 3:
                    raise ShapeMismatchError(f"pool layer expects [H, W, C], got {shape}")
                oh, ow = layer.output_hw(shape[0], shape[1])
                shape = (oh, ow, shape[2])
            elif isinstance(layer, FlattenLayer):
                shape = (math.prod(shape),)
            elif isinstance(layer, DenseLayer):
                if shape != (layer.in_units,):
                    raise ShapeMismatchError(
                        f"dense layer expects [{layer.in_units}], got {shape}"
                    )
                shape = (layer.out_units,)
            # ReLU and Softmax preserve shape
            shapes.append(shape)
        if shape != (len(self.class_labels),):
            raise ShapeMismatchError(
                f"final output shape {shape} does not match the "
                f"{len(self.class_labels)} class labels"
            )
        return shapes

    def forward(self, batch: np.ndarray) -> np.ndarray:
        """Class probabilities [N, K] for an image batch [N, H, W, C]."""
        batch = np.asarray(batch, dtype=self.dtype)
        if batch.ndim != 4 or batch.shape[1:] != self.input_shape:
            raise ShapeMismatchError(
                f"batch shape {batch.shape} does not match input shape "
                f"[N, {', '.join(map(str, self.input_shape))}]"
            )
        if batch.shape[0] == 0:
            raise EmptyTensorError("empty batch")
        x = batch
        for layer in self.layers:
            x = layer.forward(x)
        return x

    def trainable_layers(self) -> list[Layer]:
        return [l for l in self.layers if isinstance(l, (ConvLayer, DenseLayer))]

    def parameter_arrays(self) -> list[np.ndarray]:
        """Parameter tensors in declaration order: per layer, weights then bias."""
        arrays = []
        for layer in self.trainable_layers():
            arrays.append(layer.weights)
            arrays.append(layer.bias)
        return arrays

    @property
    def parameter_count(self) -> int:
        return sum(a.size for a in self.parameter_arrays())

    def describe(self) -> list[dict]:
        """JSON-able per-layer summary (type plus hyperparameters)."""
        out = []
        for layer in self.layers:
            if isinstance(layer, ConvLayer):
                out.append(
                    {
                        "type": "conv",
                        "in_channels": layer.in_channels,
                        "filters": layer.filters,
                        "kernel": [layer.kernel_h, layer.kernel_w],
                        "stride": layer.stride,
                        "padding": layer.padding,
                    }
                )
            elif isinstance(layer, MaxPoolLayer):
                out.append(
                    {
                        "type": "maxpool",
                        "window": [layer.window_h, layer.window_w],
                        "stride": layer.stride,
                    }
                )
            elif isinstance(layer, ReLULayer):
                out.append({"type": "relu"})
            elif isinstance(layer, FlattenLayer):
                out.append({"type": "flatten"})
            elif isinstance(layer, DenseLayer):
                out.append(
                    {"type": "dense", "in_units": layer.in_units, "out_units": layer.out_units}
                )
            elif isinstance(layer, SoftmaxLayer):
                out.append({"type": "softmax"})
        return out


def build_model(
    input_shape: tuple[int, int, int] = DEFAULT_INPUT_SHAPE,
    conv_filters: tuple[int, int] = (24, 32),
    kernel_size: int = 3,
    dense_units: int = 64,
    class_labels: tuple[str, ...] = CLASS_NAMES,
    seed: int = 0,
    dtype=tensor.DEFAULT_DTYPE,
) -> Model:
    """Assemble the conv/pool x2 -> flatten -> dense stack, seeded deterministically.

    Hidden activations are ReLU; the output layer is softmax over the class
    labels. Conv layers use stride 1 and no padding; pools are 2x2 stride 2.
    """
    rng = np.random.default_rng(seed)
    h, w, c = input_shape
    f1, f2 = conv_filters
    k = kernel_size

    h1, w1 = (h - k) + 1, (w - k) + 1
    p1h, p1w = (h1 - 2) // 2 + 1, (w1 - 2) // 2 + 1
    h2, w2 = (p1h - k) + 1, (p1w - k) + 1
    p2h, p2w = (h2 - 2) // 2 + 1, (w2 - 2) // 2 + 1
    flat = p2h * p2w * f2

    layers = [
        ConvLayer(c, f1, k, k, stride=1, padding=0, rng=rng, dtype=dtype),
        ReLULayer(),
        MaxPoolLayer(2, 2, stride=2),
        ConvLayer(f1, f2, k, k, stride=1, padding=0, rng=rng, dtype=dtype),
        ReLULayer(),
        MaxPoolLayer(2, 2, stride=2),
        FlattenLayer(),
        DenseLayer(flat, dense_units, rng=rng, dtype=dtype),
        ReLULayer(),
        DenseLayer(dense_units, len(class_labels), rng=rng, dtype=dtype),
        SoftmaxLayer(),
    ]
    return Model(layers, input_shape=input_shape, class_labels=class_labels, dtype=dtype)


def build_paper_model(seed: int = 0, dtype=tensor.DEFAULT_DTYPE) -> Model:
    """The reference 300x300x3 architecture: Conv(24) -> pool -> Conv(32) -> pool -> Dense(64) -> Dense(3)."""
    return build_model(seed=seed, dtype=dtype)
