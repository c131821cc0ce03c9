import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make oracles importable

from scssim import RgbImage, datasets  # noqa: E402


def random_image(rng: np.random.Generator, width: int, height: int) -> RgbImage:
    return RgbImage(rng.integers(0, 256, (height, width, 3), dtype=np.uint8))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def kodak_or_skip(index: int) -> Path:
    path = datasets.kodak_path(index)
    if not path.exists():
        pytest.skip(f"kodak image {path.name} not cached; run `scssim fetch-kodak`")
    return path
