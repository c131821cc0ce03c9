"""Deterministic, seedable image distortions.

Two groups: pixel-level degradations that leave scene composition intact
(salt & pepper, additive Gaussian noise, Gaussian blur) and geometric
changes that alter it (rotation with a fixed center crop, exact quarter
turns, center zoom, horizontal panning through a fixed window).

Every distortion is a pure function of (input, parameters, seed): the same
seed and spec yield byte-identical output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameter, WindowOutOfBounds
from .image import RgbImage

ROTATE_CROP = 362  # center-crop side length after angled rotation
PAN_WINDOW = 512  # square window size for panning

SALT_PEPPER = "salt-pepper"
GAUSSIAN_NOISE = "gaussian-noise"
GAUSSIAN_BLUR = "gaussian-blur"
ROTATE = "rotate"
ROTATE90 = "rotate90"
ZOOM = "zoom"
PAN = "pan"


def _to_uint8(arr: np.ndarray) -> np.ndarray:
    """Round half up and clamp to [0, 255]."""
    return np.clip(np.floor(arr + 0.5), 0.0, 255.0).astype(np.uint8)


def salt_pepper(img: RgbImage, density: float, rng: np.random.Generator) -> RgbImage:
    """Replace each pixel, with probability density, by pure black or white (50/50)."""
    if not 0.0 <= density <= 1.0:
        raise InvalidParameter(f"salt & pepper density {density} outside [0, 1]")
    h, w = img.height, img.width
    hit = rng.random((h, w)) < density
    white = rng.random((h, w)) < 0.5
    out = img.pixels.copy()
    out[hit & white] = 255
    out[hit & ~white] = 0
    return RgbImage(out)


def gaussian_noise(img: RgbImage, sigma: float, rng: np.random.Generator) -> RgbImage:
    """Add i.i.d. N(0, sigma^2) noise per channel on the 0-255 scale."""
    if sigma < 0:
        raise InvalidParameter(f"noise sigma {sigma} must be >= 0")
    noise = rng.normal(0.0, sigma, img.pixels.shape)
    return RgbImage(_to_uint8(img.pixels.astype(np.float64) + noise))


def _convolve_axis(arr: np.ndarray, kernel: np.ndarray, axis: int) -> np.ndarray:
    radius = len(kernel) // 2
    pad = [(0, 0)] * arr.ndim
    pad[axis] = (radius, radius)
    padded = np.pad(arr, pad, mode="edge")
    out = np.zeros_like(arr)
    index: list = [slice(None)] * arr.ndim
    for i, weight in enumerate(kernel):
        index[axis] = slice(i, i + arr.shape[axis])
        out += weight * padded[tuple(index)]
    return out


def gaussian_blur(img: RgbImage, sigma: float) -> RgbImage:
    """Separable Gaussian blur, kernel radius ceil(3*sigma), edge-replicated borders."""
    if sigma < 0:
        raise InvalidParameter(f"blur sigma {sigma} must be >= 0")
    if sigma == 0:
        return RgbImage(img.pixels.copy())
    radius = math.ceil(3.0 * sigma)
    taps = np.exp(-np.arange(-radius, radius + 1) ** 2 / (2.0 * sigma * sigma))
    taps /= taps.sum()
    arr = img.pixels.astype(np.float64)
    arr = _convolve_axis(arr, taps, axis=0)
    arr = _convolve_axis(arr, taps, axis=1)
    return RgbImage(_to_uint8(arr))


def _bilinear_sample(pixels: np.ndarray, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Sample (h, w, 3) pixels at float coordinates, clamping to the edges."""
    h, w = pixels.shape[:2]
    xs = np.clip(xs, 0.0, float(w - 1))
    ys = np.clip(ys, 0.0, float(h - 1))
    x0 = np.floor(xs).astype(np.int64)
    y0 = np.floor(ys).astype(np.int64)
    x1 = np.minimum(x0 + 1, w - 1)
    y1 = np.minimum(y0 + 1, h - 1)
    fx = (xs - x0)[..., None]
    fy = (ys - y0)[..., None]
    p = pixels.astype(np.float64)
    top = p[y0, x0] * (1.0 - fx) + p[y0, x1] * fx
    bottom = p[y1, x0] * (1.0 - fx) + p[y1, x1] * fx
    return top * (1.0 - fy) + bottom * fy


def rotate(img: RgbImage, degrees: float) -> RgbImage:
    """Bilinear counter-clockwise rotation about the image center, then a
    fixed 362x362 center crop so no extrapolated pixels survive."""
    if img.width < ROTATE_CROP or img.height < ROTATE_CROP:
        raise WindowOutOfBounds(
            f"rotation crop {ROTATE_CROP}x{ROTATE_CROP} exceeds {img.width}x{img.height} image"
        )
    cx = (img.width - 1) / 2.0
    cy = (img.height - 1) / 2.0
    ys, xs = np.mgrid[0:ROTATE_CROP, 0:ROTATE_CROP].astype(np.float64)
    xs += (img.width - ROTATE_CROP) / 2.0
    ys += (img.height - ROTATE_CROP) / 2.0
    theta = math.radians(degrees)
    cos_t, sin_t = math.cos(theta), math.sin(theta)
    dx, dy = xs - cx, ys - cy
    src_x = cx + cos_t * dx - sin_t * dy
    src_y = cy + sin_t * dx + cos_t * dy
    return RgbImage(_to_uint8(_bilinear_sample(img.pixels, src_x, src_y)))


def rotate90(img: RgbImage) -> RgbImage:
    """Exact lossless quarter turn counter-clockwise; dimensions swap."""
    return RgbImage(np.ascontiguousarray(np.rot90(img.pixels)))


def zoom(img: RgbImage, factor: float) -> RgbImage:
    """Zoom in about the center: crop 1/factor of each dimension, bilinear
    upscale back to the original size. Factor 1 is an exact identity."""
    if factor < 1.0:
        raise InvalidParameter(f"zoom factor {factor} must be >= 1")
    cx = (img.width - 1) / 2.0
    cy = (img.height - 1) / 2.0
    ys, xs = np.mgrid[0 : img.height, 0 : img.width].astype(np.float64)
    src_x = cx + (xs - cx) / factor
    src_y = cy + (ys - cy) / factor
    return RgbImage(_to_uint8(_bilinear_sample(img.pixels, src_x, src_y)))


def pan(img: RgbImage, dx: int) -> RgbImage:
    """Slide a 512x512 window, vertically centered and starting horizontally
    centered, dx pixels to the right. The window must stay inside the frame."""
    if img.width < PAN_WINDOW or img.height < PAN_WINDOW:
        raise WindowOutOfBounds(
            f"pan window {PAN_WINDOW}x{PAN_WINDOW} exceeds {img.width}x{img.height} image"
        )
    x0 = (img.width - PAN_WINDOW) // 2 + int(dx)
    y0 = (img.height - PAN_WINDOW) // 2
    if x0 < 0 or x0 + PAN_WINDOW > img.width:
        raise WindowOutOfBounds(
            f"pan by {dx} pushes the window to x={x0}, outside a {img.width}px-wide image"
        )
    window = img.pixels[y0 : y0 + PAN_WINDOW, x0 : x0 + PAN_WINDOW]
    return RgbImage(np.ascontiguousarray(window))


@dataclass(frozen=True)
class DistortionSpec:
    """One distortion instance: family name, scalar level, and noise seed.

    The level means: density (salt-pepper), sigma (gaussian-noise and
    gaussian-blur), degrees (rotate), factor (zoom), dx pixels (pan).
    rotate90 takes no level. The seed only matters for the noise kinds.
    """

    kind: str
    level: float | None = None
    seed: int = 0


@dataclass(frozen=True)
class Family:
    """Sweepable description of one distortion family."""

    kind: str
    param: str
    identity_level: float | None  # level whose output serves as the sweep baseline
    default_grid: tuple[float, ...] | None
    seeded: bool


FAMILIES = {
    SALT_PEPPER: Family(
        SALT_PEPPER, "density", 0.0, tuple(np.round(np.arange(0.05, 1.0, 0.05), 2)), True
    ),
    GAUSSIAN_NOISE: Family(GAUSSIAN_NOISE, "sigma", 0.0, tuple(range(5, 55, 5)), True),
    GAUSSIAN_BLUR: Family(
        GAUSSIAN_BLUR, "sigma", 0.0, (0.5, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0, 10.0, 12.0), False
    ),
    ROTATE: Family(ROTATE, "degrees", 0.0, tuple(range(0, 99, 9)), False),
    ZOOM: Family(ZOOM, "factor", 1.0, tuple(np.round(np.arange(1.0, 2.05, 0.1), 2)), False),
    PAN: Family(PAN, "dx", 0.0, tuple(range(0, 144, 16)), False),
    ROTATE90: Family(ROTATE90, "", None, None, False),
}


def derive_seed(seed: int, index: int) -> int:
    """Independent per-task seed for sweep level `index` under a master seed."""
    return int(np.random.SeedSequence([seed, index]).generate_state(1, np.uint64)[0])


def apply_distortion(img: RgbImage, spec: DistortionSpec) -> RgbImage:
    if spec.kind not in FAMILIES:
        raise InvalidParameter(f"unknown distortion kind {spec.kind!r}")
    if spec.kind == ROTATE90:
        return rotate90(img)
    if spec.level is None:
        raise InvalidParameter(f"{spec.kind} needs a level ({FAMILIES[spec.kind].param})")
    level = spec.level
    if spec.kind == SALT_PEPPER:
        return salt_pepper(img, level, np.random.default_rng(spec.seed))
    if spec.kind == GAUSSIAN_NOISE:
        return gaussian_noise(img, level, np.random.default_rng(spec.seed))
    if spec.kind == GAUSSIAN_BLUR:
        return gaussian_blur(img, level)
    if spec.kind == ROTATE:
        return rotate(img, level)
    if spec.kind == ZOOM:
        return zoom(img, level)
    return pan(img, int(level))
