"""Scikit-learn style front door for the convolutional classifier."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from .dataset import CLASS_NAMES
from .model import DEFAULT_INPUT_SHAPE, build_model
from .training import TrainConfig, fit
from .validation import check_images, check_labels


class ConvNetClassifier(BaseEstimator, ClassifierMixin):
    """Two-conv-stage softmax image classifier with a fit/predict interface.

    Wraps model construction and the training loop so the network composes
    with sklearn pipelines and model-selection utilities. Inputs are image
    batches shaped [N, H, W, C] with float pixels in [0, 1]; labels are class
    indices.

    Fitted attributes: `model_` (the trained network), `history_` (per-epoch
    training curves), `classes_`.
    """

    def __init__(
        self,
        input_shape: tuple[int, int, int] = DEFAULT_INPUT_SHAPE,
        conv_filters: tuple[int, int] = (24, 32),
        kernel_size: int = 3,
        dense_units: int = 64,
        class_labels: tuple[str, ...] = CLASS_NAMES,
        epochs: int = 10,
        batch_size: int = 32,
        learning_rate: float = 1e-3,
        optimizer: str = "adam",
        validation_fraction: float = 0.1,
        random_state: int = 0,
    ):
        self.input_shape = input_shape
        self.conv_filters = conv_filters
        self.kernel_size = kernel_size
        self.dense_units = dense_units
        self.class_labels = class_labels
        self.epochs = epochs
        self.batch_size = batch_size
        self.learning_rate = learning_rate
        self.optimizer = optimizer
        self.validation_fraction = validation_fraction
        self.random_state = random_state

    def fit(self, X, y):
        X = check_images(X, expected_shape=self.input_shape)
        y = check_labels(y, num_classes=len(self.class_labels), n_samples=X.shape[0])
        model = build_model(
            input_shape=self.input_shape,
            conv_filters=self.conv_filters,
            kernel_size=self.kernel_size,
            dense_units=self.dense_units,
            class_labels=self.class_labels,
            seed=self.random_state,
        )
        config = TrainConfig(
            epochs=self.epochs,
            batch_size=self.batch_size,
            learning_rate=self.learning_rate,
            optimizer=self.optimizer,
            seed=self.random_state,
            validation_fraction=self.validation_fraction,
        )
        self.history_ = fit(model, X, y, config)
        self.model_ = model
        self.classes_ = np.arange(len(self.class_labels))
        return self

    def predict_proba(self, X) -> np.ndarray:
        if not hasattr(self, "model_"):
            raise RuntimeError("estimator is not fitted; call fit first")
        X = check_images(X, expected_shape=self.input_shape)
        chunks = [
            self.model_.forward(X[start : start + self.batch_size])
            for start in range(0, len(X), self.batch_size)
        ]
        return np.concatenate(chunks, axis=0)

    def predict(self, X) -> np.ndarray:
        return self.predict_proba(X).argmax(axis=1)
