"""Kodak test-image download and cache management.

The 24 Kodak images (768x512 or 512x768 PNG) are the de facto standard
corpus for image-quality work. They are not bundled; `fetch_kodak` pulls
them into a local cache, and callers that need them should degrade
gracefully when the cache is empty (tests skip, the CLI reports an error).
"""

from __future__ import annotations

import os
import urllib.error
import urllib.request
from pathlib import Path

KODAK_COUNT = 24
KODAK_URL = "http://r0k.us/graphics/kodak/kodak/kodim{:02d}.png"
CACHE_ENV = "SCSSIM_CACHE"


def cache_dir(override=None) -> Path:
    if override:
        return Path(override)
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "scssim"


def kodak_dir(cache=None) -> Path:
    return cache_dir(cache) / "kodak"


def kodak_path(index: int, cache=None) -> Path:
    if not 1 <= index <= KODAK_COUNT:
        raise ValueError(f"Kodak index {index} outside 1..{KODAK_COUNT}")
    return kodak_dir(cache) / f"kodim{index:02d}.png"


def available_kodak(cache=None) -> list[Path]:
    """Kodak images already present in the cache, sorted by index."""
    root = kodak_dir(cache)
    if not root.is_dir():
        return []
    return sorted(root.glob("kodim[0-9][0-9].png"))


def fetch_kodak(cache=None, indices=None, timeout: float = 30.0, progress=None) -> list[Path]:
    """Download any missing Kodak images into the cache; returns their paths.

    Raises URLError/HTTPError if the host is unreachable; already-cached
    files are never re-downloaded.
    """
    root = kodak_dir(cache)
    root.mkdir(parents=True, exist_ok=True)
    paths = []
    for i in indices or range(1, KODAK_COUNT + 1):
        dest = kodak_path(i, cache)
        if not dest.exists():
            url = KODAK_URL.format(i)
            if progress:
                progress(f"fetching {url}")
            with urllib.request.urlopen(url, timeout=timeout) as resp:
                data = resp.read()
            tmp = dest.with_suffix(".part")
            tmp.write_bytes(data)
            tmp.rename(dest)
        paths.append(dest)
    return paths
