"""Normalized cumulative-gain curves and the SCS similarity measure.

A partition tree's per-cut gains, cumulated and normalized by the image's
total SSE, form a curve in [0, 1] that fingerprints the image's composition
structure. Two images are compared by replaying each image's tree on the
other and measuring how far the replayed curve drifts from the image's own:
M = exp(-decay * mean_log_ratio^2), symmetrized by averaging both directions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cupid import CupidTree, GainSeq, apply_tree, build_tree
from .errors import DegenerateImage, InvalidParameter, ScssimError
from .image import IntegralSums, RgbImage, build_integral, region_sse

DEFAULT_CUTS = 64
DEFAULT_DECAY = 25.0
DEFAULT_CURVE_FLOOR = 1e-9


@dataclass(frozen=True)
class MetricConfig:
    """All metric tunables: cut count, decay rate, and the log floor."""

    n_cuts: int = DEFAULT_CUTS
    decay: float = DEFAULT_DECAY
    curve_floor: float = DEFAULT_CURVE_FLOOR

    def __post_init__(self):
        if self.n_cuts < 1:
            raise InvalidParameter(f"n_cuts must be >= 1, got {self.n_cuts}")
        if not self.decay > 0:
            raise InvalidParameter(f"decay must be positive, got {self.decay}")
        if not 0 < self.curve_floor < 1:
            raise InvalidParameter(f"curve_floor must be in (0, 1), got {self.curve_floor}")


def cumulative_curve(seq: GainSeq, n: int) -> np.ndarray:
    """First n cumulative gains normalized by total SSE; values c_1..c_n.

    The curve is nondecreasing (gains are nonnegative) and stays within
    [0, 1] up to rounding; a violation means a bug upstream and raises.
    """
    if seq.total_sse <= 0.0:
        raise DegenerateImage("total SSE is zero; normalized curve undefined")
    if len(seq.gains) < n:
        raise InvalidParameter(f"need {n} gains, sequence has {len(seq.gains)}")
    curve = np.cumsum(seq.gains[:n]) / seq.total_sse
    if curve[-1] > 1.0 + 1e-9:
        raise ScssimError(f"cumulative curve reached {curve[-1]}, above 1: internal bug")
    return curve


@dataclass
class ImageProfile:
    """Everything reusable about one image: integral tables, tree, own curve.

    Batch workloads (pairwise matrices, sweeps) profile each image once and
    score pairs from profiles, avoiding repeated tree builds.
    """

    image: RgbImage
    sums: IntegralSums
    tree: CupidTree
    total_sse: float
    own_curve: np.ndarray | None  # None when the image is uniform


def profile_image(img: RgbImage, cfg: MetricConfig = MetricConfig()) -> ImageProfile:
    sums = build_integral(img)
    tree = build_tree(img, cfg.n_cuts, sums=sums)
    total = region_sse(sums, img.full_region())
    # Replaying a tree on its own source reproduces the recorded gains
    # bit-for-bit, so the image's own curve comes straight from the tree.
    own = None
    if total > 0.0:
        own = cumulative_curve(GainSeq(total, tree.recorded_gains()), cfg.n_cuts)
    return ImageProfile(img, sums, tree, total, own)


@dataclass
class DirectionalResult:
    """One direction of the comparison: the test image's tree replayed on the reference."""

    similarity: float  # exp(-decay * mean_log_ratio^2), in (0, 1]
    mean_log_ratio: float
    reference_curve: np.ndarray  # the reference's own curve
    test_curve: np.ndarray  # the test tree's curve measured on the reference


def directional_from_profiles(
    test: ImageProfile, reference: ImageProfile, cfg: MetricConfig = MetricConfig()
) -> DirectionalResult:
    if reference.total_sse <= 0.0 or reference.own_curve is None:
        raise DegenerateImage("reference image is uniform; its gain curve is undefined")
    replayed = apply_tree(test.tree, reference.sums)
    test_curve = cumulative_curve(replayed, cfg.n_cuts)
    ref_curve = reference.own_curve
    log_ratios = np.log(np.maximum(test_curve, cfg.curve_floor)) - np.log(
        np.maximum(ref_curve, cfg.curve_floor)
    )
    k_bar = float(log_ratios.mean())
    similarity = math.exp(-cfg.decay * (k_bar * k_bar))
    return DirectionalResult(similarity, k_bar, ref_curve, test_curve)


def directional_similarity(
    test: RgbImage, reference: RgbImage, cfg: MetricConfig = MetricConfig()
) -> float:
    """How well the test image's partition tree explains the reference image."""
    result = directional_from_profiles(profile_image(test, cfg), profile_image(reference, cfg), cfg)
    return result.similarity


@dataclass
class PairReport:
    """Full symmetric comparison: the score plus both directional results."""

    value: float
    first_as_reference: DirectionalResult  # second image tested against the first
    second_as_reference: DirectionalResult  # first image tested against the second


def scssim_from_profiles(
    a: ImageProfile, b: ImageProfile, cfg: MetricConfig = MetricConfig()
) -> PairReport:
    forward = directional_from_profiles(b, a, cfg)
    backward = directional_from_profiles(a, b, cfg)
    return PairReport((forward.similarity + backward.similarity) / 2.0, forward, backward)


def scssim(a: RgbImage, b: RgbImage, cfg: MetricConfig = MetricConfig()) -> float:
    """Symmetric scene-composition similarity in (0, 1]; 1 means same structure."""
    return scssim_from_profiles(profile_image(a, cfg), profile_image(b, cfg), cfg).value
