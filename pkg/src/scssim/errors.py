"""Exception types shared across the package."""


class ScssimError(Exception):
    """Base class for all scssim errors."""


class UnsupportedFormat(ScssimError):
    """File is readable but not a format we accept (16-bit, palette, non-P6 PPM, ...)."""


class CorruptData(ScssimError):
    """File claims a supported format but its contents are malformed or truncated."""


class RegionOutOfBounds(ScssimError):
    """A rectangle query reaches outside the image."""


class ImageTooSmall(ScssimError):
    """Image has fewer pixels than the requested partitioning needs."""


class DegenerateImage(ScssimError):
    """Image has zero total SSE (uniform color), so normalized gain curves are undefined."""


class WindowOutOfBounds(ScssimError):
    """A fixed-size crop window does not fit inside the image."""


class InvalidParameter(ScssimError):
    """A distortion or config parameter is outside its legal range."""


class SchemaViolation(ScssimError):
    """Serialized tree JSON fails validation."""
