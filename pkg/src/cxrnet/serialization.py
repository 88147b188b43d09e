"""Binary model file format (".cxrm").

Layout, all integers little-endian:

    magic            4 bytes  b"CXRM"
    format_version   u32      currently 1
    input_h/w/c      3 x u32
    layer_count      u32
    per layer:       tag u8 (1=conv 2=maxpool 3=relu 4=flatten 5=dense 6=softmax)
                     conv:    in_channels, filters, kernel_h, kernel_w, stride, padding (6 x u32)
                     maxpool: window_h, window_w, stride (3 x u32)
                     dense:   in_units, out_units (2 x u32)
    parameter blobs  float32 values in layer order, weights then bias per layer
    class labels     u32 count, then per label u32 byte length + UTF-8 bytes
    crc32            u32 over all preceding bytes

Parameters are stored and restored as float32, so a save/load round trip of a
float32 model is bitwise exact.
"""

from __future__ import annotations

import struct
import zlib

import numpy as np

from .exceptions import CorruptModelFileError
from .layers import (
    ConvLayer,
    DenseLayer,
    FlattenLayer,
    MaxPoolLayer,
    ReLULayer,
    SoftmaxLayer,
)
from .model import Model

MAGIC = b"CXRM"
FORMAT_VERSION = 1

_TAG_CONV = 1
_TAG_MAXPOOL = 2
_TAG_RELU = 3
_TAG_FLATTEN = 4
_TAG_DENSE = 5
_TAG_SOFTMAX = 6


def _serialize(model: Model) -> bytes:
    parts = [MAGIC, struct.pack("<I", FORMAT_VERSION)]
    parts.append(struct.pack("<3I", *model.input_shape))
    parts.append(struct.pack("<I", len(model.layers)))
    for layer in model.layers:
        if isinstance(layer, ConvLayer):
            parts.append(struct.pack("<B6I", _TAG_CONV, layer.in_channels, layer.filters,
                                     layer.kernel_h, layer.kernel_w, layer.stride,
                                     layer.padding))
        elif isinstance(layer, MaxPoolLayer):
            parts.append(struct.pack("<B3I", _TAG_MAXPOOL, layer.window_h,
                                     layer.window_w, layer.stride))
        elif isinstance(layer, ReLULayer):
            parts.append(struct.pack("<B", _TAG_RELU))
        elif isinstance(layer, FlattenLayer):
            parts.append(struct.pack("<B", _TAG_FLATTEN))
        elif isinstance(layer, DenseLayer):
            parts.append(struct.pack("<B2I", _TAG_DENSE, layer.in_units, layer.out_units))
        elif isinstance(layer, SoftmaxLayer):
            parts.append(struct.pack("<B", _TAG_SOFTMAX))
        else:
            raise TypeError(f"cannot serialize layer of type {type(layer).__name__}")
    for array in model.parameter_arrays():
        parts.append(np.ascontiguousarray(array, dtype="<f4").tobytes())
    parts.append(struct.pack("<I", len(model.class_labels)))
    for label in model.class_labels:
        encoded = label.encode("utf-8")
        parts.append(struct.pack("<I", len(encoded)) + encoded)
    body = b"".join(parts)
    return body + struct.pack("<I", zlib.crc32(body))


def save_model(model: Model, path: str) -> None:
    with open(path, "wb") as f:
        f.write(_serialize(model))


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise CorruptModelFileError("shape", "record extends past end of file")
        chunk = self.data[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def u8(self) -> int:
        return self.take(1)[0]

    def u32(self, count: int = 1):
        values = struct.unpack(f"<{count}I", self.take(4 * count))
        return values[0] if count == 1 else values


def load_model(path: str) -> Model:
    """Load and validate a model file; raises CorruptModelFileError on any defect."""
    with open(path, "rb") as f:
        data = f.read()
    if len(data) < len(MAGIC) + 8 or data[: len(MAGIC)] != MAGIC:
        raise CorruptModelFileError("magic", f"bad magic in {path}")
    version = struct.unpack("<I", data[4:8])[0]
    if version != FORMAT_VERSION:
        raise CorruptModelFileError(
            "version", f"unsupported format version {version} (expected {FORMAT_VERSION})"
        )
    stored_crc = struct.unpack("<I", data[-4:])[0]
    if zlib.crc32(data[:-4]) != stored_crc:
        raise CorruptModelFileError("crc", f"CRC-32 mismatch in {path}")

    r = _Reader(data[:-4])
    r.take(8)  # magic + version, already checked
    input_shape = r.u32(3)
    layer_count = r.u32()
    specs = []
    for _ in range(layer_count):
        tag = r.u8()
        if tag == _TAG_CONV:
            specs.append((_TAG_CONV, r.u32(6)))
        elif tag == _TAG_MAXPOOL:
            specs.append((_TAG_MAXPOOL, r.u32(3)))
        elif tag == _TAG_DENSE:
            specs.append((_TAG_DENSE, r.u32(2)))
        elif tag in (_TAG_RELU, _TAG_FLATTEN, _TAG_SOFTMAX):
            specs.append((tag, ()))
        else:
            raise CorruptModelFileError("shape", f"unknown layer tag {tag}")

    layers = []
    try:
        for tag, hyper in specs:
            if tag == _TAG_CONV:
                cin, filters, kh, kw, stride, padding = hyper
                layer = ConvLayer(cin, filters, kh, kw, stride, padding)
                layer.weights = _read_floats(r, (kh, kw, cin, filters))
                layer.bias = _read_floats(r, (filters,))
            elif tag == _TAG_MAXPOOL:
                layer = MaxPoolLayer(*hyper)
            elif tag == _TAG_DENSE:
                in_units, out_units = hyper
                layer = DenseLayer(in_units, out_units)
                layer.weights = _read_floats(r, (in_units, out_units))
                layer.bias = _read_floats(r, (out_units,))
            elif tag == _TAG_RELU:
                layer = ReLULayer()
            elif tag == _TAG_FLATTEN:
                layer = FlattenLayer()
            else:
                layer = SoftmaxLayer()
            layers.append(layer)
    except ValueError as exc:  # bad hyperparameters
        raise CorruptModelFileError("shape", f"invalid layer record: {exc}") from exc

    label_count = r.u32()
    labels = []
    for _ in range(label_count):
        length = r.u32()
        try:
            labels.append(r.take(length).decode("utf-8"))
        except UnicodeDecodeError as exc:
            raise CorruptModelFileError("shape", "class label is not valid UTF-8") from exc
    if r.pos != len(r.data):
        raise CorruptModelFileError("shape", "trailing bytes after class labels")

    try:
        return Model(layers, input_shape=input_shape, class_labels=tuple(labels))
    except ValueError as exc:  # layer shapes do not compose
        raise CorruptModelFileError("shape", f"inconsistent layer shapes: {exc}") from exc


def _read_floats(r: _Reader, shape: tuple[int, ...]) -> np.ndarray:
    count = int(np.prod(shape))
    raw = r.take(4 * count)
    return np.frombuffer(raw, dtype="<f4").reshape(shape).copy()


def model_file_checksum(path: str) -> str:
    """Version string for a saved model: CRC-32 of the payload, hex.

    The trailing stored CRC is excluded; including it would make every
    well-formed file hash to the same CRC-32 residue constant.
    """
    with open(path, "rb") as f:
        data = f.read()
    payload = data[:-4] if len(data) >= 4 else data
    return f"crc32:{zlib.crc32(payload):08x}"
