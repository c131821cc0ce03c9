"""Command-line interface.

Subcommands: compare, curve, tree, sweep, matrix, bench, distort,
fetch-kodak. All reports are CSV (header row first, '.' decimals) or JSON
and are byte-deterministic for fixed flags and seed. Exit codes: 0 ok,
2 I/O or format problem, 3 degenerate (uniform) image, 4 image too small
for the requested operation, 5 bad flags or parameters.
"""

from __future__ import annotations

import argparse
import csv
import json
import statistics
import sys
import time
import urllib.error
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import datasets
from .cupid import apply_tree, build_tree, tree_from_json, tree_to_json
from .distortions import (
    FAMILIES,
    GAUSSIAN_NOISE,
    ROTATE90,
    DistortionSpec,
    apply_distortion,
    derive_seed,
)
from .errors import (
    CorruptData,
    DegenerateImage,
    ImageTooSmall,
    InvalidParameter,
    SchemaViolation,
    UnsupportedFormat,
    WindowOutOfBounds,
)
from .image import RgbImage, build_integral, load_image, save_image
from .metric import MetricConfig, cumulative_curve, profile_image, scssim_from_profiles
from .synthetic import make_scene

IMAGE_SUFFIXES = (".png", ".ppm")


class _Parser(argparse.ArgumentParser):
    # bad flags exit 5, not argparse's default 2 (2 is reserved for I/O errors)
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(5, f"{self.prog}: error: {message}\n")


def _add_metric_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--cuts", type=int, default=64, help="tree cut count (default 64)")
    p.add_argument(
        "--lambda", dest="decay", type=float, default=25.0, help="decay rate (default 25)"
    )


def _config(args) -> MetricConfig:
    return MetricConfig(n_cuts=args.cuts, decay=args.decay)


def _open_out(path):
    return open(path, "w", newline="") if path else sys.stdout


def _close_out(fh) -> None:
    if fh is not sys.stdout:
        fh.close()


def _map_concurrent(fn, items, workers: int):
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))  # order-preserving


def cmd_compare(args) -> int:
    cfg = _config(args)
    ref = profile_image(load_image(args.reference), cfg)
    test = profile_image(load_image(args.test), cfg)
    report = scssim_from_profiles(ref, test, cfg)
    if args.json:
        def direction(result, ref_path, test_path):
            return {
                "reference": str(ref_path),
                "test": str(test_path),
                "similarity": result.similarity,
                "mean_log_ratio": result.mean_log_ratio,
                "reference_curve": [float(v) for v in result.reference_curve],
                "test_curve": [float(v) for v in result.test_curve],
            }

        doc = {
            "scssim": report.value,
            "cuts": cfg.n_cuts,
            "lambda": cfg.decay,
            "reference": str(args.reference),
            "test": str(args.test),
            "directions": [
                direction(report.first_as_reference, args.reference, args.test),
                direction(report.second_as_reference, args.test, args.reference),
            ],
        }
        print(json.dumps(doc, indent=2))
    else:
        print(f"{report.value:.6f}")
    return 0


def cmd_curve(args) -> int:
    cfg = _config(args)
    img = load_image(args.image)
    sums = build_integral(img)
    own_tree = build_tree(img, cfg.n_cuts, sums=sums)
    own = cumulative_curve(apply_tree(own_tree, sums), cfg.n_cuts)
    if args.against:
        other = load_image(args.against)
        other_tree = build_tree(other, cfg.n_cuts, sums=build_integral(other))
        replayed = cumulative_curve(apply_tree(other_tree, sums), cfg.n_cuts)
    elif args.tree:
        loaded = tree_from_json(Path(args.tree).read_text())
        if loaded.n_cuts < cfg.n_cuts:
            raise InvalidParameter(
                f"tree has {loaded.n_cuts} cuts, need at least {cfg.n_cuts}"
            )
        replayed = cumulative_curve(apply_tree(loaded, sums), cfg.n_cuts)
    else:
        replayed = own
    out = _open_out(args.out)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["i", "c0", "c"])
    for i in range(cfg.n_cuts):
        writer.writerow([i + 1, repr(float(own[i])), repr(float(replayed[i]))])
    _close_out(out)
    return 0


def cmd_tree(args) -> int:
    cfg = _config(args)
    img = load_image(args.image)
    text = tree_to_json(build_tree(img, cfg.n_cuts))
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return 0


def _parse_grid(text: str) -> list[float]:
    try:
        values = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise InvalidParameter(f"bad grid value: {exc}") from exc
    if not values:
        raise InvalidParameter("grid is empty")
    return values


def cmd_sweep(args) -> int:
    cfg = _config(args)
    family = FAMILIES[args.distortion]
    if family.default_grid is None and not args.grid:
        raise InvalidParameter(f"{family.kind} is not sweepable (no scalar level)")
    grid = _parse_grid(args.grid) if args.grid else list(family.default_grid)
    ref = load_image(args.reference)

    # Every level is scored against the family's identity-parameter output
    # ("no distortion"), so families whose geometry forces a crop (rotate,
    # pan) compare crops against the identically cropped baseline.
    baseline = apply_distortion(ref, DistortionSpec(family.kind, family.identity_level, args.seed))
    base_profile = profile_image(baseline, cfg)

    def score(item):
        index, level = item
        spec = DistortionSpec(family.kind, level, derive_seed(args.seed, index))
        distorted = apply_distortion(ref, spec)
        return scssim_from_profiles(base_profile, profile_image(distorted, cfg), cfg).value

    values = _map_concurrent(score, list(enumerate(grid)), args.workers)

    out = _open_out(args.out)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["kind", "level", "scssim", "seed", "cuts", "lambda", "reference"])
    for level, value in zip(grid, values):
        writer.writerow(
            [family.kind, repr(level), repr(value), args.seed, cfg.n_cuts, repr(cfg.decay),
             str(args.reference)]
        )
    _close_out(out)
    return 0


def cmd_matrix(args) -> int:
    cfg = _config(args)
    root = Path(args.directory)
    if not root.is_dir():
        raise NotADirectoryError(f"{root} is not a directory")
    paths = sorted(p for p in root.iterdir() if p.suffix.lower() in IMAGE_SUFFIXES)
    if not paths:
        raise FileNotFoundError(f"no .png/.ppm images in {root}")
    profiles = _map_concurrent(
        lambda p: profile_image(load_image(p), cfg), paths, args.workers
    )

    n = len(paths)
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    scores = _map_concurrent(
        lambda ij: scssim_from_profiles(profiles[ij[0]], profiles[ij[1]], cfg).value,
        pairs,
        args.workers,
    )
    matrix = np.zeros((n, n))
    for (i, j), value in zip(pairs, scores):
        matrix[i, j] = matrix[j, i] = value

    # provenance goes to stderr so the CSV stays a clean square matrix
    print(f"# matrix over {n} images, cuts={cfg.n_cuts} lambda={cfg.decay!r}", file=sys.stderr)
    out = _open_out(args.out)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["image"] + [p.name for p in paths])
    for i, p in enumerate(paths):
        writer.writerow([p.name] + [repr(float(v)) for v in matrix[i]])
    _close_out(out)

    if args.heatmap:
        gray = np.clip(np.floor(matrix * 255.0 + 0.5), 0, 255).astype(np.uint8)
        save_image(RgbImage(np.repeat(gray[:, :, None], 3, axis=2)), args.heatmap)
    return 0


def cmd_bench(args) -> int:
    cfg = _config(args)
    sizes = [int(v) for v in _parse_grid(args.sizes)] if args.sizes else [128, 256, 512, 1024]
    if args.repeats < 1:
        raise InvalidParameter("repeats must be >= 1")
    out = _open_out(args.out)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["pixels", "mean_ms", "std_ms", "repeats", "cuts", "lambda"])
    for size in sizes:
        a = make_scene(size, size, seed=0)
        b = apply_distortion(a, DistortionSpec(GAUSSIAN_NOISE, 10.0, seed=1))
        timings = []
        for _ in range(args.repeats):
            t0 = time.perf_counter()
            scssim_from_profiles(profile_image(a, cfg), profile_image(b, cfg), cfg)
            timings.append((time.perf_counter() - t0) * 1000.0)
        mean = statistics.fmean(timings)
        std = statistics.pstdev(timings) if len(timings) > 1 else 0.0
        writer.writerow(
            [size * size, f"{mean:.3f}", f"{std:.3f}", args.repeats, cfg.n_cuts, repr(cfg.decay)]
        )
    _close_out(out)
    return 0


def cmd_distort(args) -> int:
    img = load_image(args.image)
    if args.kind != ROTATE90 and args.level is None:
        raise InvalidParameter(f"--level is required for {args.kind}")
    spec = DistortionSpec(args.kind, args.level, args.seed)
    save_image(apply_distortion(img, spec), args.out)
    return 0


def cmd_fetch_kodak(args) -> int:
    try:
        paths = datasets.fetch_kodak(cache=args.cache, progress=lambda m: print(m, file=sys.stderr))
    except (urllib.error.URLError, OSError) as exc:
        print(f"error: kodak download failed: {exc}", file=sys.stderr)
        return 2
    print(f"{len(paths)} kodak images in {datasets.kodak_dir(args.cache)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="scssim", description="Scene-composition similarity toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("compare", help="score one image pair")
    p.add_argument("reference")
    p.add_argument("test")
    _add_metric_flags(p)
    p.add_argument("--json", action="store_true", help="emit directional details as JSON")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("curve", help="export normalized cumulative gain curves as CSV")
    p.add_argument("image")
    source = p.add_mutually_exclusive_group()
    source.add_argument("--against", help="build the tree on this image and replay it here")
    source.add_argument("--tree", help="replay a stored tree JSON instead of building one")
    _add_metric_flags(p)
    p.add_argument("--out", help="CSV output path (default stdout)")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("tree", help="dump an image's partition tree as JSON")
    p.add_argument("image")
    _add_metric_flags(p)
    p.add_argument("--out", help="JSON output path (default stdout)")
    p.set_defaults(func=cmd_tree)

    p = sub.add_parser("sweep", help="score a distortion family across a level grid")
    p.add_argument("reference")
    p.add_argument(
        "--distortion", required=True, choices=sorted(FAMILIES), help="distortion family"
    )
    p.add_argument("--grid", help="comma-separated levels (default: per-family grid)")
    p.add_argument("--seed", type=int, default=0)
    _add_metric_flags(p)
    p.add_argument("--out", help="CSV output path (default stdout)")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("matrix", help="pairwise similarity matrix over a directory")
    p.add_argument("directory")
    _add_metric_flags(p)
    p.add_argument("--out", help="CSV output path (default stdout)")
    p.add_argument("--heatmap", help="also render a grayscale PPM heatmap here")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("bench", help="time build+score across image sizes")
    p.add_argument("--sizes", help="comma-separated square sizes (default 128,256,512,1024)")
    p.add_argument("--repeats", type=int, default=3)
    _add_metric_flags(p)
    p.add_argument("--out", help="CSV output path (default stdout)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("distort", help="apply one distortion and write the result")
    p.add_argument("image")
    p.add_argument("--kind", required=True, choices=sorted(FAMILIES))
    p.add_argument("--level", type=float, help="family level (see sweep)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output image (.ppm or .png)")
    p.set_defaults(func=cmd_distort)

    p = sub.add_parser("fetch-kodak", help="download the Kodak corpus into the cache")
    p.add_argument("--cache", help=f"cache directory (default ${datasets.CACHE_ENV} or ~/.cache/scssim)")
    p.set_defaults(func=cmd_fetch_kodak)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse --help exits 0, flag errors exit 5
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (FileNotFoundError, IsADirectoryError, NotADirectoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (UnsupportedFormat, CorruptData, SchemaViolation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DegenerateImage as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ImageTooSmall, WindowOutOfBounds) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except InvalidParameter as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5
    except OSError as exc:  # unwritable output paths and the like
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
