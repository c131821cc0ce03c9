"""Image representation, file ingestion, and integral-sum tables.

Images are 8-bit RGB rasters. The integral tables hold 2D prefix sums of
channel values and of squared pixel norms (r^2+g^2+b^2), which makes the
sum-of-squared-errors of any axis-aligned rectangle an O(1) query.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import CorruptData, RegionOutOfBounds, UnsupportedFormat

# Ingestion cap. Keeps every squared-norm prefix entry within the exactly
# representable integer range (16384^2 * 3 * 255^2 < 2^53) with margin.
MAX_DIM = 16384

_PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"


@dataclass(frozen=True)
class Region:
    """Axis-aligned pixel rectangle: [x0, x1) x [y0, y1), half-open."""

    x0: int
    y0: int
    x1: int
    y1: int

    def __post_init__(self):
        if not (0 <= self.x0 < self.x1 and 0 <= self.y0 < self.y1):
            raise RegionOutOfBounds(f"degenerate region {self}")

    @property
    def width(self) -> int:
        return self.x1 - self.x0

    @property
    def height(self) -> int:
        return self.y1 - self.y0

    @property
    def area(self) -> int:
        return self.width * self.height


class RgbImage:
    """Owned 8-bit RGB raster backed by an immutable (h, w, 3) uint8 array."""

    def __init__(self, pixels: np.ndarray):
        pixels = np.asarray(pixels)
        if pixels.ndim != 3 or pixels.shape[2] != 3:
            raise ValueError(f"expected (h, w, 3) array, got shape {pixels.shape}")
        if pixels.dtype != np.uint8:
            raise ValueError(f"expected uint8 pixels, got {pixels.dtype}")
        if pixels.shape[0] < 1 or pixels.shape[1] < 1:
            raise ValueError("image must be at least 1x1")
        pixels = np.ascontiguousarray(pixels)
        pixels.flags.writeable = False
        self.pixels = pixels

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def full_region(self) -> Region:
        return Region(0, 0, self.width, self.height)

    def __eq__(self, other) -> bool:
        return isinstance(other, RgbImage) and np.array_equal(self.pixels, other.pixels)

    def __repr__(self) -> str:
        return f"RgbImage({self.width}x{self.height})"


def _check_ingest_dims(width: int, height: int) -> None:
    if width < 1 or height < 1:
        raise CorruptData(f"invalid image dimensions {width}x{height}")
    if width > MAX_DIM or height > MAX_DIM:
        raise UnsupportedFormat(
            f"image {width}x{height} exceeds the {MAX_DIM}x{MAX_DIM} ingestion cap"
        )


def _load_png(data: bytes) -> RgbImage:
    try:
        img = Image.open(io.BytesIO(data))
        img.load()
    except UnidentifiedImageError as exc:
        raise CorruptData(f"cannot decode PNG: {exc}") from exc
    except OSError as exc:
        raise CorruptData(f"truncated or malformed PNG: {exc}") from exc

    mode = img.mode
    if mode in ("L", "LA"):
        gray = np.asarray(img.convert("L"), dtype=np.uint8)
        _check_ingest_dims(gray.shape[1], gray.shape[0])
        return RgbImage(np.repeat(gray[:, :, None], 3, axis=2))
    if mode in ("RGB", "RGBA"):
        rgb = np.asarray(img.convert("RGB") if mode == "RGBA" else img, dtype=np.uint8)
        _check_ingest_dims(rgb.shape[1], rgb.shape[0])
        return RgbImage(rgb)
    raise UnsupportedFormat(f"PNG mode {mode!r} not supported (need 8-bit gray/RGB/RGBA)")


def _load_ppm(data: bytes) -> RgbImage:
    # Binary PPM (P6): ASCII header of magic, width, height, maxval, with
    # '#' comments allowed, then a single whitespace byte and raw RGB data.
    pos = 2  # past the magic, already checked

    def next_token() -> bytes:
        nonlocal pos
        while pos < len(data):
            ch = data[pos : pos + 1]
            if ch == b"#":
                while pos < len(data) and data[pos : pos + 1] not in (b"\n", b"\r"):
                    pos += 1
            elif ch.isspace():
                pos += 1
            else:
                break
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise CorruptData("truncated PPM header")
        return data[start:pos]

    try:
        width = int(next_token())
        height = int(next_token())
        maxval = int(next_token())
    except ValueError as exc:
        raise CorruptData(f"bad PPM header token: {exc}") from exc
    if maxval != 255:
        raise UnsupportedFormat(f"PPM maxval {maxval} not supported (need 255)")
    _check_ingest_dims(width, height)
    pos += 1  # exactly one whitespace byte separates header from raster
    expected = width * height * 3
    raster = data[pos : pos + expected]
    if len(raster) != expected:
        raise CorruptData(f"PPM raster has {len(raster)} bytes, expected {expected}")
    pixels = np.frombuffer(raster, dtype=np.uint8).reshape(height, width, 3)
    return RgbImage(pixels.copy())


def load_image(path) -> RgbImage:
    """Load a PNG (8-bit gray/RGB/RGBA) or binary PPM (P6, maxval 255).

    Grayscale is replicated to three channels; alpha is discarded.
    """
    path = Path(path)
    data = path.read_bytes()  # raises FileNotFoundError
    if data.startswith(_PNG_SIGNATURE):
        return _load_png(data)
    if data.startswith(b"P6"):
        return _load_ppm(data)
    if len(data) >= 2 and data[:1] == b"P" and data[1:2] in b"123457":
        raise UnsupportedFormat(f"PPM/PNM type {data[:2].decode()} not supported (need P6)")
    raise UnsupportedFormat(f"{path.name}: not a PNG or P6 PPM file")


def save_ppm(img: RgbImage, path) -> None:
    """Write a binary PPM (P6, maxval 255)."""
    with open(path, "wb") as fh:
        fh.write(b"P6\n%d %d\n255\n" % (img.width, img.height))
        fh.write(img.pixels.tobytes())


def save_png(img: RgbImage, path) -> None:
    Image.fromarray(img.pixels, mode="RGB").save(path, format="PNG")


def save_image(img: RgbImage, path) -> None:
    """Write PNG or PPM P6 depending on the file extension (default PPM)."""
    if str(path).lower().endswith(".png"):
        save_png(img, path)
    else:
        save_ppm(img, path)


class IntegralSums:
    """Per-channel prefix sums S and squared-norm prefix sums Q of an image.

    S has shape (h+1, w+1, 3) and Q shape (h+1, w+1); entry [y, x] holds the
    sum over all pixels with coordinates strictly below (x, y). Row 0 and
    column 0 are zero. All arithmetic is exact int64 (inputs are <= 255 and
    dimensions are capped at ingestion).
    """

    def __init__(self, channel_sums: np.ndarray, squared_sums: np.ndarray):
        channel_sums.flags.writeable = False  # safe to share across readers
        squared_sums.flags.writeable = False
        self.channel_sums = channel_sums
        self.squared_sums = squared_sums
        self.height = channel_sums.shape[0] - 1
        self.width = channel_sums.shape[1] - 1

    def check_region(self, region: Region) -> None:
        if region.x1 > self.width or region.y1 > self.height:
            raise RegionOutOfBounds(
                f"{region} outside {self.width}x{self.height} image"
            )

    def rect_channel_sums(self, region: Region) -> np.ndarray:
        """Per-channel value sum over the region, as an int64 3-vector."""
        s = self.channel_sums
        return (
            s[region.y1, region.x1]
            - s[region.y0, region.x1]
            - s[region.y1, region.x0]
            + s[region.y0, region.x0]
        )

    def rect_squared_sum(self, region: Region) -> int:
        """Sum of r^2+g^2+b^2 over the region, exact."""
        q = self.squared_sums
        return int(
            q[region.y1, region.x1]
            - q[region.y0, region.x1]
            - q[region.y1, region.x0]
            + q[region.y0, region.x0]
        )


_SQUARE_LUT = np.arange(256, dtype=np.int32) ** 2


def build_integral(img: RgbImage) -> IntegralSums:
    """Build the prefix-sum tables for an image.

    Cumulates in place over the zero-padded tables (the leading zero row and
    column pass through cumsum unchanged), touching each table only twice.
    """
    h, w = img.height, img.width

    s = np.empty((h + 1, w + 1, 3), dtype=np.int64)
    s[0] = 0
    s[:, 0] = 0
    s[1:, 1:] = img.pixels
    np.cumsum(s, axis=0, out=s)
    np.cumsum(s, axis=1, out=s)

    q = np.empty((h + 1, w + 1), dtype=np.int64)
    q[0] = 0
    q[:, 0] = 0
    np.sum(_SQUARE_LUT[img.pixels], axis=2, dtype=np.int64, out=q[1:, 1:])
    np.cumsum(q, axis=0, out=q)
    np.cumsum(q, axis=1, out=q)
    return IntegralSums(s, q)


def region_sse(sums: IntegralSums, region: Region) -> float:
    """Sum of squared distances from the region's mean RGB vector.

    Computed as Q - |S|^2/n, which is algebraically identical to summing
    squared deviations per pixel. The numerator Q*n - |S|^2 is evaluated in
    exact integer arithmetic; the only rounding is the final division.
    """
    sums.check_region(region)
    n = region.area
    s = sums.rect_channel_sums(region)
    q = sums.rect_squared_sum(region)
    sr, sg, sb = int(s[0]), int(s[1]), int(s[2])
    num = q * n - (sr * sr + sg * sg + sb * sb)
    if num <= 0:  # exact arithmetic keeps this >= 0; guard stays for safety
        return 0.0
    return num / n
