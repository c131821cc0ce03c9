"""Deterministic synthetic test scenes with strong composition structure.

Scenes imitate the large-scale layout of natural photographs and spread
their SSE across many scales, the way real photos do:

- a dominant, gently sloped band boundary anchored near the vertical
  center (like a horizon), plus optional peripheral boundaries kept inside
  the central half so a 2x center zoom never pushes them out of frame;
- vertical pillars of varied width and irregular spacing, alpha-blended
  so they read as structure without dominating the energy;
- several octaves of smooth low-frequency lighting variation;
- low-amplitude pixel texture.

The slope of the anchor boundary matters: horizontal panning then shifts
the in-window boundary height linearly with the pan distance, and zooming
moves peripheral structure outward steadily, so geometric distortions
decorrelate the scene progressively instead of all at once. Layout is
derived from the seed in relative coordinates: one seed yields the same
composition at any resolution.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidParameter
from .image import RgbImage

# Contrasting base colors; layouts draw from these without replacement.
_PALETTE = np.array(
    [
        (148, 184, 222),  # pale sky blue
        (92, 146, 74),  # field green
        (70, 52, 38),  # dark soil
        (205, 176, 98),  # wheat
        (171, 62, 54),  # brick red
        (58, 88, 126),  # slate blue
        (222, 218, 206),  # chalk
        (34, 34, 40),  # near black
        (126, 104, 168),  # heather
        (186, 120, 48),  # amber
    ],
    dtype=np.float64,
)

# (cell size as a fraction of the short side, amplitude) per octave
_OCTAVES = ((0.45, 26.0), (0.22, 20.0), (0.11, 14.0), (0.055, 9.0))


def _smooth_field(rng: np.random.Generator, height: int, width: int, cell_frac: float,
                  amplitude: float) -> np.ndarray:
    """Low-frequency luminance field: coarse random grid, bilinearly upsampled."""
    cell = max(int(round(min(height, width) * cell_frac)), 2)
    gh = height // cell + 2
    gw = width // cell + 2
    grid = rng.uniform(-amplitude, amplitude, (gh, gw))
    ys = np.linspace(0.0, gh - 1.0, height)
    xs = np.linspace(0.0, gw - 1.0, width)
    y0 = np.floor(ys).astype(int)
    x0 = np.floor(xs).astype(int)
    y1 = np.minimum(y0 + 1, gh - 1)
    x1 = np.minimum(x0 + 1, gw - 1)
    fy = (ys - y0)[:, None]
    fx = (xs - x0)[None, :]
    top = grid[np.ix_(y0, x0)] * (1 - fx) + grid[np.ix_(y0, x1)] * fx
    bot = grid[np.ix_(y1, x0)] * (1 - fx) + grid[np.ix_(y1, x1)] * fx
    return top * (1 - fy) + bot * fy


def make_scene(width: int, height: int, seed: int = 0, texture: float = 6.0,
               contrast: float = 0.6) -> RgbImage:
    """Build a structured scene; layout and colors are functions of the seed."""
    if width < 8 or height < 8:
        raise InvalidParameter(f"scene must be at least 8x8, got {width}x{height}")
    rng = np.random.default_rng(seed)

    anchor = rng.uniform(0.42, 0.58)
    n_extra = int(rng.integers(0, 3))
    extras = []
    if n_extra >= 1:
        extras.append(rng.uniform(0.22, 0.32))
    if n_extra >= 2:
        extras.append(rng.uniform(0.68, 0.78))
    splits = np.sort(np.array([anchor] + extras))
    n_bands = len(splits) + 1
    signs = rng.choice([-1.0, 1.0], len(splits))
    slopes = signs * rng.uniform(0.18, 0.32, len(splits))

    colors = _PALETTE[rng.permutation(len(_PALETTE))]
    colors = 128.0 + (colors - 128.0) * contrast
    band_colors = colors[:n_bands]
    pillar_colors = colors[n_bands:]

    yy = np.arange(height)[:, None]
    xx = np.arange(width)[None, :]
    band_index = np.zeros((height, width), dtype=np.intp)
    for f, slope in zip(splits, slopes):
        band_index += yy >= (f * height + slope * (xx - width / 2.0))
    canvas = band_colors[band_index]

    n_pillars = int(rng.integers(4, 8))
    offsets = np.sort(rng.uniform(0.02, 0.9, n_pillars))
    for p in range(n_pillars):
        wf = rng.uniform(0.03, 0.1)
        y1f = rng.uniform(splits[0] * 0.6, min(splits[0] + 0.5, 1.0))
        x0 = int(round(offsets[p] * width))
        x1 = min(int(round((offsets[p] + wf) * width)), width)
        y1 = min(max(int(round(y1f * height)), 1), height)
        if x1 <= x0:
            x1 = x0 + 1
        color = pillar_colors[p % len(pillar_colors)]
        canvas[0:y1, x0:x1] = canvas[0:y1, x0:x1] * 0.5 + color * 0.5

    for cell_frac, amplitude in _OCTAVES:
        canvas += _smooth_field(rng, height, width, cell_frac, amplitude)[:, :, None]

    if texture > 0:
        canvas += rng.integers(-int(texture), int(texture) + 1, (height, width, 3))
    return RgbImage(np.clip(np.round(canvas), 0, 255).astype(np.uint8))
