"""Exception types shared across the package."""


class ShapeMismatchError(ValueError):
    """Operand shapes are incompatible for the requested operation."""


class EmptyTensorError(ValueError):
    """Operation requires at least one element."""


class TooSmallInputError(ValueError):
    """Spatial input too small for the layer's window, stride, and padding."""


class DecodeError(ValueError):
    """Image bytes are malformed or truncated."""


class UnsupportedImageFormatError(ValueError):
    """Bytes decode to an image container other than PNG or JPEG."""


class DatasetError(ValueError):
    """Problem with the on-disk dataset layout or contents."""


class MissingClassDirectoryError(DatasetError):
    """A required class subdirectory is absent."""


class EmptyClassError(DatasetError):
    """A class subdirectory contains no usable images."""


class PixelRangeError(ValueError):
    """Pixel values fall outside the expected range."""


class CorruptModelFileError(ValueError):
    """Model file failed validation.

    `reason` is one of "magic", "version", "crc", "shape".
    """

    def __init__(self, reason: str, message: str):
        super().__init__(message)
        self.reason = reason


class DivergenceError(RuntimeError):
    """Training produced a non-finite loss or parameter."""
