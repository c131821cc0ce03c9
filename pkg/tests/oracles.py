"""Independent brute-force reference implementations for the tests.

Everything here works directly on (h, w, 3) uint8 pixel arrays with plain
per-pixel arithmetic: SSE by computing the mean and summing squared
deviations, cut search by enumerating every candidate, greedy building by
rescanning all leaves. Deliberately naive so it shares no code (and no
algebra shortcuts) with the package under test.
"""

from __future__ import annotations

import numpy as np


def pixel_sse(pixels: np.ndarray, x0: int, y0: int, x1: int, y1: int) -> float:
    """Sum of squared deviations from the mean RGB vector, straight per-pixel."""
    block = pixels[y0:y1, x0:x1].astype(np.float64).reshape(-1, 3)
    mu = block.mean(axis=0)
    return float(((block - mu) ** 2).sum())


def prefix_sums(pixels: np.ndarray):
    """Double-loop prefix tables: per-channel sums and squared-norm sums."""
    h, w = pixels.shape[:2]
    s = np.zeros((h + 1, w + 1, 3), dtype=np.int64)
    q = np.zeros((h + 1, w + 1), dtype=np.int64)
    for y in range(1, h + 1):
        for x in range(1, w + 1):
            block = pixels[:y, :x].astype(np.int64)
            s[y, x] = block.sum(axis=(0, 1))
            q[y, x] = (block.astype(np.int64) ** 2).sum()
    return s, q


def exhaustive_best_cut(pixels: np.ndarray, x0: int, y0: int, x1: int, y1: int):
    """Scan every horizontal (top-to-bottom) then vertical (left-to-right)
    cut, keeping the first strict maximum. Returns (axis, offset, gain) or
    None for a single-pixel region."""
    w, h = x1 - x0, y1 - y0
    if w * h == 1:
        return None
    e = pixel_sse(pixels, x0, y0, x1, y1)
    best = None
    best_gain = -np.inf
    for off in range(1, h):
        gain = e - pixel_sse(pixels, x0, y0, x1, y0 + off) - pixel_sse(
            pixels, x0, y0 + off, x1, y1
        )
        if gain > best_gain:
            best = ("H", off)
            best_gain = gain
    for off in range(1, w):
        gain = e - pixel_sse(pixels, x0, y0, x0 + off, y1) - pixel_sse(
            pixels, x0 + off, y0, x1, y1
        )
        if gain > best_gain:
            best = ("V", off)
            best_gain = gain
    return best[0], best[1], max(best_gain, 0.0)


def greedy_tree(pixels: np.ndarray, n_cuts: int):
    """Greedy partitioning by full rescan: at each step split the earliest-
    created leaf whose best cut has the globally maximal gain. Returns the
    list of (axis, offset, gain, region) per cut, in creation order."""
    h, w = pixels.shape[:2]
    leaves = [(0, (0, 0, w, h), exhaustive_best_cut(pixels, 0, 0, w, h))]
    next_seq = 1
    cuts = []
    for _ in range(n_cuts):
        candidates = [leaf for leaf in leaves if leaf[2] is not None]
        seq, region, (axis, offset, gain) = min(
            candidates, key=lambda leaf: (-leaf[2][2], leaf[0])
        )
        x0, y0, x1, y1 = region
        if axis == "H":
            first = (x0, y0, x1, y0 + offset)
            second = (x0, y0 + offset, x1, y1)
        else:
            first = (x0, y0, x0 + offset, y1)
            second = (x0 + offset, y0, x1, y1)
        cuts.append((axis, offset, gain, region))
        leaves.remove((seq, region, (axis, offset, gain)))
        for child in (first, second):
            leaves.append((next_seq, child, exhaustive_best_cut(pixels, *child)))
            next_seq += 1
    return cuts
