"""Chest radiograph classifier: data pipeline, CNN, training, metrics, and serving."""

from .dataset import (
    CLASS_NAMES,
    IMAGE_SIZE,
    DatasetManifest,
    balance_classes,
    decode_image,
    load_images,
    normalize,
    preprocess_image_bytes,
    resize_bilinear,
    scan_directory,
    stratified_split,
)
from .estimator import ConvNetClassifier
from .exceptions import (
    CorruptModelFileError,
    DatasetError,
    DecodeError,
    DivergenceError,
    EmptyTensorError,
    PixelRangeError,
    ShapeMismatchError,
    TooSmallInputError,
    UnsupportedImageFormatError,
)
from .metrics import ConfusionMatrix, MetricsReport, compute_metrics, confusion_matrix
from .model import Model, build_model, build_paper_model
from .serialization import load_model, model_file_checksum, save_model
from .training import TrainConfig, TrainHistory, cross_entropy, fit

__version__ = "0.1.0"

__all__ = [
    "CLASS_NAMES",
    "IMAGE_SIZE",
    "ConfusionMatrix",
    "ConvNetClassifier",
    "CorruptModelFileError",
    "DatasetError",
    "DatasetManifest",
    "DecodeError",
    "DivergenceError",
    "EmptyTensorError",
    "MetricsReport",
    "Model",
    "PixelRangeError",
    "ShapeMismatchError",
    "TooSmallInputError",
    "TrainConfig",
    "TrainHistory",
    "UnsupportedImageFormatError",
    "balance_classes",
    "build_model",
    "build_paper_model",
    "compute_metrics",
    "confusion_matrix",
    "cross_entropy",
    "decode_image",
    "fit",
    "load_images",
    "load_model",
    "model_file_checksum",
    "normalize",
    "preprocess_image_bytes",
    "resize_bilinear",
    "save_model",
    "scan_directory",
    "stratified_split",
    "__version__",
]
