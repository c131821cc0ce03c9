"""Training-free full-reference similarity for scene composition structure.

Builds greedy SSE-optimal cuboidal partition trees of images and compares
their normalized cumulative-gain curves.
"""

from .cupid import (
    CupidTree,
    Cut,
    GainSeq,
    TreeNode,
    apply_tree,
    best_cut,
    build_tree,
    cut_gain,
    split_region,
    tree_from_json,
    tree_to_json,
)
from .distortions import DistortionSpec, apply_distortion
from .errors import (
    CorruptData,
    DegenerateImage,
    ImageTooSmall,
    InvalidParameter,
    RegionOutOfBounds,
    SchemaViolation,
    ScssimError,
    UnsupportedFormat,
    WindowOutOfBounds,
)
from .image import (
    IntegralSums,
    Region,
    RgbImage,
    build_integral,
    load_image,
    region_sse,
    save_image,
    save_png,
    save_ppm,
)
from .metric import (
    DirectionalResult,
    ImageProfile,
    MetricConfig,
    PairReport,
    cumulative_curve,
    directional_similarity,
    profile_image,
    scssim,
    scssim_from_profiles,
)
from .synthetic import make_scene

__version__ = "0.1.0"
