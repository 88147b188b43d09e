"""Cross-entropy loss, optimizers, and the mini-batch training loop."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DivergenceError, ShapeMismatchError
from .layers import SoftmaxLayer, softmax
from .model import Model

LOG_EPSILON = 1e-12
OPTIMIZERS = ("adam", "sgd-momentum")


@dataclass
class TrainConfig:
    epochs: int = 10
    batch_size: int = 32
    learning_rate: float = 1e-3
    optimizer: str = "adam"
    seed: int = 0
    validation_fraction: float = 0.1

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.learning_rate <= 0:
            raise ValueError(f"learning_rate must be > 0, got {self.learning_rate}")
        if self.optimizer not in OPTIMIZERS:
            raise ValueError(f"optimizer must be one of {OPTIMIZERS}, got {self.optimizer!r}")
        if not 0 <= self.validation_fraction < 1:
            raise ValueError(
                f"validation_fraction must be in [0, 1), got {self.validation_fraction}"
            )


@dataclass
class EpochRecord:
    epoch: int
    train_loss: float
    train_accuracy: float
    val_loss: float | None
    val_accuracy: float | None
    wall_clock_seconds: float


@dataclass
class TrainHistory:
    records: list[EpochRecord] = field(default_factory=list)

    @property
    def train_loss(self) -> list[float]:
        return [r.train_loss for r in self.records]

    @property
    def train_accuracy(self) -> list[float]:
        return [r.train_accuracy for r in self.records]

    def to_csv(self, path: str) -> None:
        """Export as "epoch,train_loss,train_acc,val_loss,val_acc,seconds"."""
        with open(path, "w", encoding="utf-8") as f:
            f.write("epoch,train_loss,train_acc,val_loss,val_acc,seconds\n")
            for r in self.records:
                val_loss = "" if r.val_loss is None else repr(r.val_loss)
                val_acc = "" if r.val_accuracy is None else repr(r.val_accuracy)
                f.write(
                    f"{r.epoch},{r.train_loss!r},{r.train_accuracy!r},"
                    f"{val_loss},{val_acc},{r.wall_clock_seconds!r}\n"
                )


def _check_probs_labels(probs: np.ndarray, labels: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    probs = np.asarray(probs)
    labels = np.asarray(labels)
    if probs.ndim != 2 or labels.ndim != 1 or probs.shape[0] != labels.shape[0]:
        raise ShapeMismatchError(
            f"expected probabilities [N, K] and labels [N], got {probs.shape} and {labels.shape}"
        )
    row_sums = probs.sum(axis=1)
    if np.any(np.abs(row_sums - 1.0) > 1e-4):
        raise ValueError("probability rows must sum to 1 within 1e-4")
    k = probs.shape[1]
    if labels.size and (labels.min() < 0 or labels.max() >= k):
        raise ValueError(f"labels must lie in [0, {k}), got range "
                         f"[{labels.min()}, {labels.max()}]")
    return probs, labels


def cross_entropy(probs: np.ndarray, labels: np.ndarray) -> float:
    """Mean over the batch of -log(p[true class]), clamped at 1e-12."""
    probs, labels = _check_probs_labels(probs, labels)
    picked = probs[np.arange(labels.shape[0]), labels]
    return float(np.mean(-np.log(np.maximum(picked, LOG_EPSILON))))


def loss_backward(probs: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """Fused softmax + cross-entropy gradient w.r.t. logits: (p - onehot) / N."""
    probs, labels = _check_probs_labels(probs, labels)
    n = labels.shape[0]
    grad = probs.copy()
    grad[np.arange(n), labels] -= 1.0
    return grad / n


class SGDMomentum:
    """SGD with classical momentum: v <- mu*v + g; p <- p - lr*v."""

    def __init__(self, learning_rate: float, momentum: float = 0.9):
        self.learning_rate = learning_rate
        self.momentum = momentum
        self._velocity: list[np.ndarray] | None = None

    def step(self, params: list[np.ndarray], grads: list[np.ndarray]) -> None:
        if len(params) != len(grads):
            raise ShapeMismatchError("params and grads differ in length")
        if self._velocity is None:
            self._velocity = [np.zeros_like(p) for p in params]
        for p, g, v in zip(params, grads, self._velocity):
            if p.shape != g.shape:
                raise ShapeMismatchError(f"param {p.shape} vs grad {g.shape}")
            v *= self.momentum
            v += g
            p -= (self.learning_rate * v).astype(p.dtype, copy=False)


class Adam:
    """Adam with bias correction (beta1=0.9, beta2=0.999, eps=1e-8)."""

    def __init__(self, learning_rate: float, beta1: float = 0.9, beta2: float = 0.999,
                 epsilon: float = 1e-8):
        self.learning_rate = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.epsilon = epsilon
        self._m: list[np.ndarray] | None = None
        self._v: list[np.ndarray] | None = None
        self._t = 0

    def step(self, params: list[np.ndarray], grads: list[np.ndarray]) -> None:
        if len(params) != len(grads):
            raise ShapeMismatchError("params and grads differ in length")
        if self._m is None:
            self._m = [np.zeros_like(p, dtype=np.float64) for p in params]
            self._v = [np.zeros_like(p, dtype=np.float64) for p in params]
        self._t += 1
        bc1 = 1.0 - self.beta1 ** self._t
        bc2 = 1.0 - self.beta2 ** self._t
        for p, g, m, v in zip(params, grads, self._m, self._v):
            if p.shape != g.shape:
                raise ShapeMismatchError(f"param {p.shape} vs grad {g.shape}")
            g64 = g.astype(np.float64, copy=False)
            m *= self.beta1
            m += (1 - self.beta1) * g64
            v *= self.beta2
            v += (1 - self.beta2) * g64 * g64
            update = self.learning_rate * (m / bc1) / (np.sqrt(v / bc2) + self.epsilon)
            p -= update.astype(p.dtype, copy=False)


def make_optimizer(config: TrainConfig):
    if config.optimizer == "adam":
        return Adam(config.learning_rate)
    return SGDMomentum(config.learning_rate)


def _collect_params_and_grads(model: Model) -> tuple[list[np.ndarray], list[np.ndarray]]:
    params, grads = [], []
    for layer in model.trainable_layers():
        params.extend([layer.weights, layer.bias])
        grads.extend([layer.weight_grad, layer.bias_grad])
    return params, grads


def _evaluate(model: Model, images: np.ndarray, labels: np.ndarray,
              batch_size: int) -> tuple[float, float]:
    total_loss = 0.0
    correct = 0
    for start in range(0, len(images), batch_size):
        batch = images[start : start + batch_size]
        y = labels[start : start + batch_size]
        probs = model.forward(batch)
        total_loss += cross_entropy(probs, y) * len(batch)
        correct += int(np.sum(probs.argmax(axis=1) == y))
    return total_loss / len(images), correct / len(images)


def fit(model: Model, images: np.ndarray, labels: np.ndarray,
        config: TrainConfig) -> TrainHistory:
    """Train `model` in place on (images, labels); returns the per-epoch history.

    Each epoch draws a fresh seeded shuffle; mini-batches of `batch_size` are
    used with the final partial batch kept. A validation subset (if
    `validation_fraction` > 0) is carved off once before the first epoch.
    """
    images = np.asarray(images)
    labels = np.asarray(labels)
    if len(images) == 0:
        raise ValueError("training set is empty")
    if images.ndim != 4 or images.shape[1:] != model.input_shape:
        raise ShapeMismatchError(
            f"images shape {images.shape} does not match model input {model.input_shape}"
        )
    if not isinstance(model.layers[-1], SoftmaxLayer):
        raise ValueError("model must end with a softmax layer")
    hidden = model.layers[:-1]

    rng = np.random.default_rng(config.seed)
    n_val = round(len(images) * config.validation_fraction)
    order = rng.permutation(len(images))
    val_idx, train_idx = order[:n_val], order[n_val:]
    if len(train_idx) == 0:
        raise ValueError("validation split leaves no training samples")

    optimizer = make_optimizer(config)
    history = TrainHistory()
    for epoch in range(1, config.epochs + 1):
        t0 = time.perf_counter()
        epoch_order = train_idx[rng.permutation(len(train_idx))]
        loss_sum = 0.0
        correct = 0
        for start in range(0, len(epoch_order), config.batch_size):
            idx = epoch_order[start : start + config.batch_size]
            batch = np.asarray(images[idx], dtype=model.dtype)
            y = labels[idx]

            x = batch
            for layer in hidden:
                x = layer.forward(x)
            probs = softmax(x)

            batch_loss = cross_entropy(probs, y)
            if not np.isfinite(batch_loss):
                raise DivergenceError(f"non-finite loss at epoch {epoch}")
            loss_sum += batch_loss * len(idx)
            correct += int(np.sum(probs.argmax(axis=1) == y))

            grad = loss_backward(probs, y).astype(model.dtype)
            for layer in reversed(hidden):
                grad = layer.backward(grad)
            optimizer.step(*_collect_params_and_grads(model))

        for p in model.parameter_arrays():
            if not np.all(np.isfinite(p)):
                raise DivergenceError(f"non-finite parameter after epoch {epoch}")

        val_loss = val_acc = None
        if n_val:
            val_loss, val_acc = _evaluate(
                model, images[val_idx], labels[val_idx], config.batch_size
            )
        history.records.append(
            EpochRecord(
                epoch=epoch,
                train_loss=loss_sum / len(epoch_order),
                train_accuracy=correct / len(epoch_order),
                val_loss=val_loss,
                val_accuracy=val_acc,
                wall_clock_seconds=time.perf_counter() - t0,
            )
        )
    return history
