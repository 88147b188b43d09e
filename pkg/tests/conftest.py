"""Shared fixtures: tiny models, synthetic images, and dataset trees."""

import io
import os

import numpy as np
import pytest
from PIL import Image

from cxrnet.model import build_model

CLASS_DIRS = ("normal", "influenza_pneumonia", "covid19_pneumonia")


def png_bytes(array: np.ndarray) -> bytes:
    buf = io.BytesIO()
    Image.fromarray(array).save(buf, format="PNG")
    return buf.getvalue()


def jpeg_bytes(array: np.ndarray, quality: int = 95) -> bytes:
    buf = io.BytesIO()
    Image.fromarray(array).save(buf, format="JPEG", quality=quality)
    return buf.getvalue()


def solid_rgb(h: int, w: int, color=(32, 64, 96)) -> np.ndarray:
    return np.full((h, w, 3), color, dtype=np.uint8)


def pattern_images(n_per_class: int, size: int, seed: int = 0):
    """Three visually distinct synthetic classes: horizontal stripes,
    vertical stripes, and a checkerboard, over light background noise."""
    rng = np.random.default_rng(seed)
    images, labels = [], []
    for label in range(3):
        for _ in range(n_per_class):
            img = rng.uniform(0.0, 0.15, size=(size, size, 3))
            if label == 0:
                img[::4, :, :] += 0.8
            elif label == 1:
                img[:, ::4, :] += 0.8
            else:
                ii, jj = np.indices((size, size))
                img[((ii // 4 + jj // 4) % 2== 0)] += 0.8
            images.append(np.clip(img, 0.0, 1.0))
            labels.append(label)
    x = np.asarray(images, dtype=np.float32)
    y = np.asarray(labels, dtype=np.int64)
    return x, y


def write_dataset_tree(root, counts=(3, 3, 3), size: int = 24, seed: int = 0):
    """Create the fixed three-directory layout with small random PNGs."""
    rng = np.random.default_rng(seed)
    for label, name in enumerate(CLASS_DIRS):
        d = os.path.join(root, name)
        os.makedirs(d, exist_ok=True)
        for i in range(counts[label]):
            arr = rng.integers(0, 256, size=(size, size, 3), dtype=np.uint8)
            Image.fromarray(arr).save(os.path.join(d, f"img{i:03d}.png"))


@pytest.fixture
def tiny_model():
    # 16x16 input keeps conv/pool shapes valid: 14 -> 7 -> 5 -> 2
    return build_model(
        input_shape=(16, 16, 3), conv_filters=(3, 4), dense_units=8, seed=0
    )


@pytest.fixture
def dataset_tree(tmp_path):
    write_dataset_tree(str(tmp_path), counts=(4, 3, 3))
    return str(tmp_path)
