"""Dataset ingestion: directory scanning, decoding, resizing, balancing, splitting.

Expected on-disk layout:

    <root>/normal/*.png|jpg|jpeg
    <root>/influenza_pneumonia/*
    <root>/covid19_pneumonia/*

Class indices are fixed: normal=0, influenza_pneumonia=1, covid19_pneumonia=2.
The same decode -> resize -> normalize path preprocesses both training data
and images submitted to the inference service.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass, field

import numpy as np
from PIL import Image, UnidentifiedImageError

from .exceptions import (
    DecodeError,
    EmptyClassError,
    MissingClassDirectoryError,
    PixelRangeError,
    UnsupportedImageFormatError,
)

CLASS_NAMES = ("normal", "influenza_pneumonia", "covid19_pneumonia")
IMAGE_EXTENSIONS = (".png", ".jpg", ".jpeg")
IMAGE_SIZE = 300


@dataclass
class LabeledImage:
    """Decoded, resized, normalized image plus its class label."""

    pixels: np.ndarray  # [H, W, 3] float32 in [0, 1]
    label: int
    source_path: str


@dataclass
class DatasetManifest:
    """Maps image files (paths relative to `root`) to class indices."""

    root: str
    entries: list[tuple[str, int]]
    warnings: list[str] = field(default_factory=list)

    def __post_init__(self):
        paths = [p for p, _ in self.entries]
        if len(set(paths)) != len(paths):
            raise ValueError("manifest paths must be unique")

    @property
    def class_counts(self) -> dict[int, int]:
        counts = {i: 0 for i in range(len(CLASS_NAMES))}
        for _, label in self.entries:
            counts[label] += 1
        return counts

    def entries_for_class(self, label: int) -> list[tuple[str, int]]:
        return [e for e in self.entries if e[1] == label]


@dataclass
class SplitDataset:
    """Disjoint train/test partition of a manifest's entries."""

    root: str
    train: list[tuple[str, int]]
    test: list[tuple[str, int]]
    seed: int


def scan_directory(root: str) -> DatasetManifest:
    """Build a manifest from the fixed three-class directory layout.

    Non-image files are skipped and recorded in the manifest's warnings list.
    Scanning order is sorted, so the manifest is deterministic for a given tree.
    """
    entries: list[tuple[str, int]] = []
    warnings: list[str] = []
    for label, name in enumerate(CLASS_NAMES):
        class_dir = os.path.join(root, name)
        if not os.path.isdir(class_dir):
            raise MissingClassDirectoryError(f"missing class directory: {class_dir}")
        n_before = len(entries)
        for fname in sorted(os.listdir(class_dir)):
            path = os.path.join(class_dir, fname)
            if not os.path.isfile(path):
                continue
            if os.path.splitext(fname)[1].lower() in IMAGE_EXTENSIONS:
                entries.append((os.path.join(name, fname), label))
            else:
                warnings.append(f"skipped non-image file: {os.path.join(name, fname)}")
        if len(entries) == n_before:
            raise EmptyClassError(f"class directory has no images: {class_dir}")
    return DatasetManifest(root=root, entries=entries, warnings=warnings)


def decode_image(data: bytes) -> np.ndarray:
    """Decode PNG/JPEG bytes to an [H, W, 3] uint8 array.

    Grayscale sources are replicated into all three channels; alpha channels
    are dropped.
    """
    try:
        img = Image.open(io.BytesIO(data))
    except UnidentifiedImageError as exc:
        raise DecodeError("bytes are not a decodable image") from exc
    if img.format not in ("PNG", "JPEG"):
        raise UnsupportedImageFormatError(f"unsupported image format: {img.format}")
    try:
        img.load()
        rgb = img.convert("RGB")
    except Exception as exc:
        raise DecodeError(f"failed to decode image: {exc}") from exc
    return np.asarray(rgb, dtype=np.uint8)


def resize_bilinear(img: np.ndarray, out_h: int = IMAGE_SIZE, out_w: int = IMAGE_SIZE) -> np.ndarray:
    """Bilinear resize with half-pixel-center source coordinates.

    Source coordinate for output pixel i is (i + 0.5) * (in / out) - 0.5;
    neighbors past the border are clamped (edge replication). Returns float64.
    """
    img = np.asarray(img)
    if img.ndim != 3:
        raise ValueError(f"expected [H, W, C] image, got shape {img.shape}")
    h, w, _ = img.shape
    if h < 1 or w < 1:
        raise ValueError("image must have at least one row and column")
    src = img.astype(np.float64)

    ys = (np.arange(out_h) + 0.5) * (h / out_h) - 0.5
    xs = (np.arange(out_w) + 0.5) * (w / out_w) - 0.5
    y0 = np.floor(ys).astype(np.int64)
    x0 = np.floor(xs).astype(np.int64)
    fy = (ys - y0)[:, None, None]
    fx = (xs - x0)[None, :, None]
    y0c = np.clip(y0, 0, h - 1)
    y1c = np.clip(y0 + 1, 0, h - 1)
    x0c = np.clip(x0, 0, w - 1)
    x1c = np.clip(x0 + 1, 0, w - 1)

    top = src[y0c[:, None], x0c[None, :], :] * (1 - fx) + src[y0c[:, None], x1c[None, :], :] * fx
    bottom = src[y1c[:, None], x0c[None, :], :] * (1 - fx) + src[y1c[:, None], x1c[None, :], :] * fx
    return top * (1 - fy) + bottom * fy


def normalize(img: np.ndarray) -> np.ndarray:
    """Map values from [0, 255] to [0, 1] by dividing by 255; returns float32."""
    img = np.asarray(img)
    if img.size and (img.min() < 0 or img.max() > 255):
        raise PixelRangeError(
            f"pixel values outside [0, 255]: min={img.min()}, max={img.max()}"
        )
    return (img.astype(np.float64) / 255.0).astype(np.float32)


def preprocess_image_bytes(
    data: bytes, out_h: int = IMAGE_SIZE, out_w: int = IMAGE_SIZE
) -> np.ndarray:
    """Decode -> resize -> normalize. Shared by dataset loading and the server."""
    return normalize(resize_bilinear(decode_image(data), out_h, out_w))


def load_labeled_image(root: str, relpath: str, label: int) -> LabeledImage:
    with open(os.path.join(root, relpath), "rb") as f:
        data = f.read()
    return LabeledImage(pixels=preprocess_image_bytes(data), label=label, source_path=relpath)


def load_images(root: str, entries: list[tuple[str, int]]) -> tuple[np.ndarray, np.ndarray]:
    """Load manifest entries into batched arrays: X [N, 300, 300, 3] float32, y [N] int64."""
    images = np.empty((len(entries), IMAGE_SIZE, IMAGE_SIZE, 3), dtype=np.float32)
    labels = np.empty(len(entries), dtype=np.int64)
    for i, (relpath, label) in enumerate(entries):
        images[i] = load_labeled_image(root, relpath, label).pixels
        labels[i] = label
    return images, labels


def balance_classes(manifest: DatasetManifest, seed: int) -> DatasetManifest:
    """Undersample every class to the smallest class count (uniform, without replacement)."""
    counts = manifest.class_counts
    for label, count in counts.items():
        if count == 0:
            raise EmptyClassError(f"class {CLASS_NAMES[label]} has no entries")
    target = min(counts.values())
    rng = np.random.default_rng(seed)
    kept: list[tuple[str, int]] = []
    for label in range(len(CLASS_NAMES)):
        class_entries = manifest.entries_for_class(label)
        picked = rng.choice(len(class_entries), size=target, replace=False)
        kept.extend(class_entries[i] for i in sorted(picked))
    return DatasetManifest(root=manifest.root, entries=kept, warnings=list(manifest.warnings))


def stratified_split(manifest: DatasetManifest, test_fraction: float, seed: int) -> SplitDataset:
    """Per-class seeded shuffle, then cut round(count * test_fraction) into the test set."""
    if not 0 < test_fraction < 1:
        raise ValueError(f"test_fraction must be in (0, 1), got {test_fraction}")
    rng = np.random.default_rng(seed)
    train: list[tuple[str, int]] = []
    test: list[tuple[str, int]] = []
    for label in range(len(CLASS_NAMES)):
        class_entries = manifest.entries_for_class(label)
        order = rng.permutation(len(class_entries))
        n_test = round(len(class_entries) * test_fraction)
        test.extend(class_entries[i] for i in order[:n_test])
        train.extend(class_entries[i] for i in order[n_test:])
    return SplitDataset(root=manifest.root, train=train, test=test, seed=seed)


def save_manifest(manifest: DatasetManifest, path: str) -> None:
    """Write entries as "<label-index>\\t<relative-path>" lines, UTF-8."""
    with open(path, "w", encoding="utf-8") as f:
        for relpath, label in manifest.entries:
            f.write(f"{label}\t{relpath}\n")


def load_manifest(path: str, root: str) -> DatasetManifest:
    entries: list[tuple[str, int]] = []
    with open(path, encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            label_text, sep, relpath = line.partition("\t")
            if not sep or not relpath:
                raise ValueError(f"{path}:{line_no}: expected '<label>\\t<path>'")
            label = int(label_text)
            if not 0 <= label < len(CLASS_NAMES):
                raise ValueError(f"{path}:{line_no}: label {label} out of range")
            entries.append((relpath, label))
    return DatasetManifest(root=root, entries=entries)
