"""Greedy hierarchical cuboidal partitioning of images.

Repeatedly splits the image with the straight (full-width or full-height)
cut that maximally reduces total SSE, recording the cuts as a binary tree.
A stored tree can be replayed onto another image, mapping each cut position
proportionally, to measure how well the tree explains that image.
"""

from __future__ import annotations

import heapq
import itertools
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ImageTooSmall, InvalidParameter, SchemaViolation
from .image import IntegralSums, Region, RgbImage, build_integral, region_sse

HORIZONTAL = "H"  # cut along a row boundary, splitting into top/bottom
VERTICAL = "V"  # cut along a column boundary, splitting into left/right


@dataclass(frozen=True)
class Cut:
    """One straight cut of a rectangular region.

    offset counts pixels from the region's top edge (horizontal cuts) or
    left edge (vertical cuts) and lies in [1, parent_extent - 1].
    """

    axis: str
    offset: int
    parent_extent: int
    gain: float
    order: int  # 1-based creation index within the tree


@dataclass(frozen=True)
class TreeNode:
    cut: Cut
    parent: int  # index of the node whose child region this cut splits; -1 at the root
    side: str  # "L" (left/top child of parent) or "R" (right/bottom child)


@dataclass
class CupidTree:
    """Ordered cut sequence forming a binary partition tree of the source image."""

    source_width: int
    source_height: int
    nodes: list[TreeNode]

    @property
    def n_cuts(self) -> int:
        return len(self.nodes)

    def recorded_gains(self) -> np.ndarray:
        return np.array([node.cut.gain for node in self.nodes], dtype=np.float64)


@dataclass
class GainSeq:
    """Per-cut gains of a tree measured on some target image, plus that image's total SSE."""

    total_sse: float
    gains: np.ndarray


def split_region(region: Region, axis: str, offset: int) -> tuple[Region, Region]:
    """Split a region at the given cut; returns (left/top, right/bottom)."""
    if axis == HORIZONTAL:
        if not 1 <= offset <= region.height - 1:
            raise InvalidParameter(f"horizontal offset {offset} outside [1, {region.height - 1}]")
        y = region.y0 + offset
        return (
            Region(region.x0, region.y0, region.x1, y),
            Region(region.x0, y, region.x1, region.y1),
        )
    if axis == VERTICAL:
        if not 1 <= offset <= region.width - 1:
            raise InvalidParameter(f"vertical offset {offset} outside [1, {region.width - 1}]")
        x = region.x0 + offset
        return (
            Region(region.x0, region.y0, x, region.y1),
            Region(x, region.y0, region.x1, region.y1),
        )
    raise InvalidParameter(f"unknown axis {axis!r}")


def cut_gain(sums: IntegralSums, region: Region, axis: str, offset: int) -> float:
    """SSE reduction achieved by one cut: e - (e1 + e2), clamped at zero.

    This single code path produces every gain the package reports, so gains
    recorded at build time and gains replayed later are bit-identical.
    """
    left, right = split_region(region, axis, offset)
    g = region_sse(sums, region) - region_sse(sums, left) - region_sse(sums, right)
    return g if g > 0.0 else 0.0


def _candidate_gains(sums: IntegralSums, region: Region) -> tuple[np.ndarray, np.ndarray]:
    """Gains of all horizontal (top-to-bottom) and vertical (left-to-right) cuts.

    Vectorized over the integral tables: O(width + height) per region.
    Returned values are float approximations used only to pick the argmax;
    the winner's gain is recomputed through cut_gain.
    """
    s_tab, q_tab = sums.channel_sums, sums.squared_sums
    x0, y0, x1, y1 = region.x0, region.y0, region.x1, region.y1
    w, h = region.width, region.height
    n = float(region.area)

    s_all = sums.rect_channel_sums(region).astype(np.float64)
    q_all = float(sums.rect_squared_sum(region))
    e = q_all - (s_all @ s_all) / n

    gains_h = np.empty(0)
    if h >= 2:
        ys = np.arange(y0 + 1, y1)
        s_top = (s_tab[ys, x1] - s_tab[y0, x1] - s_tab[ys, x0] + s_tab[y0, x0]).astype(np.float64)
        q_top = (q_tab[ys, x1] - q_tab[y0, x1] - q_tab[ys, x0] + q_tab[y0, x0]).astype(np.float64)
        n_top = ((ys - y0) * w).astype(np.float64)
        s_bot = s_all - s_top
        e_top = q_top - np.einsum("ij,ij->i", s_top, s_top) / n_top
        e_bot = (q_all - q_top) - np.einsum("ij,ij->i", s_bot, s_bot) / (n - n_top)
        gains_h = e - e_top - e_bot

    gains_v = np.empty(0)
    if w >= 2:
        xs = np.arange(x0 + 1, x1)
        s_lef = (s_tab[y1, xs] - s_tab[y0, xs] - s_tab[y1, x0] + s_tab[y0, x0]).astype(np.float64)
        q_lef = (q_tab[y1, xs] - q_tab[y0, xs] - q_tab[y1, x0] + q_tab[y0, x0]).astype(np.float64)
        n_lef = ((xs - x0) * h).astype(np.float64)
        s_rig = s_all - s_lef
        e_lef = q_lef - np.einsum("ij,ij->i", s_lef, s_lef) / n_lef
        e_rig = (q_all - q_lef) - np.einsum("ij,ij->i", s_rig, s_rig) / (n - n_lef)
        gains_v = e - e_lef - e_rig

    return gains_h, gains_v


def best_cut(sums: IntegralSums, region: Region):
    """Cut of the region with the maximal gain, or None for a 1x1 region.

    Tie-break is deterministic: horizontal cuts are scanned top-to-bottom,
    then vertical left-to-right, and the first cut reaching the maximum wins.
    Returns (axis, offset, gain).
    """
    sums.check_region(region)
    if region.area == 1:
        return None
    gains_h, gains_v = _candidate_gains(sums, region)
    gains = np.concatenate([gains_h, gains_v])
    idx = int(np.argmax(gains))  # argmax keeps the first of equal maxima
    if idx < len(gains_h):
        axis, offset = HORIZONTAL, idx + 1
    else:
        axis, offset = VERTICAL, idx - len(gains_h) + 1
    return axis, offset, cut_gain(sums, region, axis, offset)


def build_tree(img: RgbImage, n_cuts: int, sums: IntegralSums | None = None) -> CupidTree:
    """Greedy construction of the partition tree with exactly n_cuts cuts.

    Maintains the current leaf regions, each annotated with its best cut,
    in a max-priority heap keyed on gain. At every step the leaf with the
    globally maximal best-cut gain is split (ties go to the leaf created
    earliest); only the two new leaves need their best cut computed.
    Zero-gain cuts are taken like any other, so the tree always reaches the
    requested length.
    """
    if n_cuts < 1:
        raise InvalidParameter(f"n_cuts must be >= 1, got {n_cuts}")
    if img.width * img.height < n_cuts + 1:
        raise ImageTooSmall(
            f"{img.width}x{img.height} image cannot host {n_cuts + 1} partitions"
        )
    if sums is None:
        sums = build_integral(img)

    heap: list[tuple] = []
    leaf_seq = itertools.count()

    def add_leaf(region: Region, parent: int, side: str) -> None:
        seq = next(leaf_seq)
        found = best_cut(sums, region)
        if found is not None:  # 1x1 leaves can never be split again
            axis, offset, gain = found
            heapq.heappush(heap, (-gain, seq, region, axis, offset, parent, side))

    add_leaf(img.full_region(), -1, "L")

    nodes: list[TreeNode] = []
    for k in range(n_cuts):
        neg_gain, _, region, axis, offset, parent, side = heapq.heappop(heap)
        extent = region.height if axis == HORIZONTAL else region.width
        nodes.append(TreeNode(Cut(axis, offset, extent, -neg_gain, k + 1), parent, side))
        left, right = split_region(region, axis, offset)
        add_leaf(left, k, "L")
        add_leaf(right, k, "R")
    return CupidTree(img.width, img.height, nodes)


def apply_tree(tree: CupidTree, target: IntegralSums) -> GainSeq:
    """Replay a tree's cuts on another image, in creation order.

    Each cut's position is mapped proportionally into its target region:
    target_offset = floor(offset/parent_extent * target_extent + 0.5),
    clamped into the legal range. A cut whose target region is empty or
    has extent 1 on the cut axis is void: it contributes gain 0, its left
    child is the whole region and its right child is empty. When target
    dimensions equal the source dimensions every mapped offset equals the
    original one, so replaying a tree on its own source reproduces the
    recorded gains exactly.
    """
    full = Region(0, 0, target.width, target.height)
    total = region_sse(target, full)
    gains = np.zeros(len(tree.nodes), dtype=np.float64)
    children: list[tuple[Region | None, Region | None]] = []

    for k, node in enumerate(tree.nodes):
        if node.parent == -1:
            region: Region | None = full
        else:
            pair = children[node.parent]
            region = pair[0] if node.side == "L" else pair[1]

        if region is None:
            children.append((None, None))
            continue
        extent = region.height if node.cut.axis == HORIZONTAL else region.width
        if extent < 2:
            children.append((region, None))
            continue

        frac = node.cut.offset / node.cut.parent_extent
        offset = math.floor(frac * extent + 0.5)
        offset = min(max(offset, 1), extent - 1)
        left, right = split_region(region, node.cut.axis, offset)
        gains[k] = cut_gain(target, region, node.cut.axis, offset)
        children.append((left, right))

    return GainSeq(total, gains)


def tree_to_json(tree: CupidTree) -> str:
    """Serialize a tree to its JSON wire form (cuts in creation order)."""
    doc = {
        "source": {"w": tree.source_width, "h": tree.source_height},
        "cuts": [
            {
                "order": node.cut.order,
                "axis": node.cut.axis,
                "offset": node.cut.offset,
                "parent_extent": node.cut.parent_extent,
                "gain": node.cut.gain,
                "parent": node.parent,
                "side": node.side,
            }
            for node in tree.nodes
        ],
    }
    return json.dumps(doc, indent=2)


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise SchemaViolation(message)


def _is_int(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def tree_from_json(text: str) -> CupidTree:
    """Parse and validate the JSON wire form of a tree.

    Beyond field-level checks, the cuts are replayed on the declared source
    dimensions to verify each parent_extent matches the region it claims to
    split and every derived region is nonempty.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaViolation(f"not valid JSON: {exc}") from exc

    _require(isinstance(doc, dict), "top level must be an object")
    source = doc.get("source")
    _require(isinstance(source, dict), "missing source object")
    width, height = source.get("w"), source.get("h")
    _require(_is_int(width) and width >= 1, "source.w must be a positive integer")
    _require(_is_int(height) and height >= 1, "source.h must be a positive integer")
    cuts = doc.get("cuts")
    _require(isinstance(cuts, list) and len(cuts) >= 1, "cuts must be a nonempty list")

    nodes: list[TreeNode] = []
    children: list[tuple[Region | None, Region | None]] = []
    used_slots: set[tuple[int, str]] = set()
    for i, entry in enumerate(cuts):
        _require(isinstance(entry, dict), f"cut {i} must be an object")
        order = entry.get("order")
        _require(order == i + 1, f"cut {i}: order must equal creation index {i + 1}")
        axis = entry.get("axis")
        _require(axis in (HORIZONTAL, VERTICAL), f"cut {i}: axis must be 'H' or 'V'")
        side = entry.get("side")
        _require(side in ("L", "R"), f"cut {i}: side must be 'L' or 'R'")
        parent = entry.get("parent")
        _require(_is_int(parent), f"cut {i}: parent must be an integer")
        if i == 0:
            _require(parent == -1, "cut 0 must have parent -1")
        else:
            _require(0 <= parent < i, f"cut {i}: parent must reference an earlier cut")
            _require((parent, side) not in used_slots, f"cut {i}: child slot already split")
        used_slots.add((parent, side))
        offset = entry.get("offset")
        extent = entry.get("parent_extent")
        _require(_is_int(offset), f"cut {i}: offset must be an integer")
        _require(_is_int(extent), f"cut {i}: parent_extent must be an integer")
        gain = entry.get("gain")
        _require(
            isinstance(gain, (int, float)) and not isinstance(gain, bool),
            f"cut {i}: gain must be a number",
        )
        gain = float(gain)
        _require(math.isfinite(gain) and gain >= 0.0, f"cut {i}: gain must be finite and >= 0")

        # Replay geometry on the source dimensions.
        if i == 0:
            region = Region(0, 0, width, height)
        else:
            pair = children[parent]
            region = pair[0] if side == "L" else pair[1]
            _require(region is not None, f"cut {i}: parent slot is an empty region")
        real_extent = region.height if axis == HORIZONTAL else region.width
        _require(
            extent == real_extent,
            f"cut {i}: parent_extent {extent} but replayed region extent is {real_extent}",
        )
        _require(1 <= offset <= extent - 1, f"cut {i}: offset {offset} outside [1, {extent - 1}]")
        left, right = split_region(region, axis, offset)
        children.append((left, right))
        nodes.append(TreeNode(Cut(axis, offset, extent, gain, i + 1), parent, side))

    return CupidTree(width, height, nodes)
