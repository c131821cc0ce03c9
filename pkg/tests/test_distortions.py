"""Distortion generators: identities, determinism, and statistical checks."""

import numpy as np
import pytest

from conftest import random_image

from scssim import InvalidParameter, RgbImage, WindowOutOfBounds, make_scene
from scssim.distortions import (
    FAMILIES,
    PAN_WINDOW,
    ROTATE_CROP,
    DistortionSpec,
    apply_distortion,
    derive_seed,
    gaussian_blur,
    gaussian_noise,
    pan,
    rotate,
    rotate90,
    salt_pepper,
    zoom,
)


def test_salt_pepper_density_zero_is_identity(rng):
    img = random_image(rng, 16, 12)
    out = salt_pepper(img, 0.0, np.random.default_rng(1))
    assert out == img


def test_salt_pepper_density_one_is_all_black_or_white():
    img = make_scene(512, 512, seed=1)
    out = salt_pepper(img, 1.0, np.random.default_rng(2))
    flat = out.pixels.reshape(-1, 3)
    is_black = (flat == 0).all(axis=1)
    is_white = (flat == 255).all(axis=1)
    assert (is_black | is_white).all()
    white_fraction = is_white.mean()
    assert abs(white_fraction - 0.5) < 0.02


def test_salt_pepper_bad_density(rng):
    with pytest.raises(InvalidParameter):
        salt_pepper(random_image(rng, 4, 4), 1.5, np.random.default_rng(0))


def test_gaussian_noise_sigma_zero_is_identity(rng):
    img = random_image(rng, 8, 8)
    assert gaussian_noise(img, 0.0, np.random.default_rng(3)) == img


def test_gaussian_noise_changes_pixels_but_keeps_mean(rng):
    img = make_scene(128, 96, seed=2)
    out = gaussian_noise(img, 15.0, np.random.default_rng(4))
    assert out != img
    drift = out.pixels.astype(float).mean() - img.pixels.astype(float).mean()
    assert abs(drift) < 1.0  # zero-mean noise, clamping aside


def test_gaussian_blur_sigma_zero_is_identity(rng):
    img = random_image(rng, 9, 7)
    assert gaussian_blur(img, 0.0) == img


def test_gaussian_blur_preserves_global_mean():
    img = make_scene(96, 64, seed=5)
    out = gaussian_blur(img, 3.0)
    for c in range(3):
        drift = out.pixels[..., c].astype(float).mean() - img.pixels[..., c].astype(float).mean()
        assert abs(drift) <= 0.5


def test_gaussian_blur_flattens_variance():
    img = make_scene(96, 64, seed=6)
    assert gaussian_blur(img, 4.0).pixels.std() < img.pixels.std()


def test_rotate90_four_times_identity(rng):
    img = random_image(rng, 10, 6)
    out = rotate90(rotate90(rotate90(rotate90(img))))
    assert out == img


def test_rotate90_swaps_dimensions(rng):
    img = random_image(rng, 10, 6)
    out = rotate90(img)
    assert (out.width, out.height) == (6, 10)


def test_rotate_zero_equals_center_crop():
    img = make_scene(768, 512, seed=7)
    out = rotate(img, 0.0)
    x0 = (768 - ROTATE_CROP) // 2
    y0 = (512 - ROTATE_CROP) // 2
    assert np.array_equal(out.pixels, img.pixels[y0 : y0 + ROTATE_CROP, x0 : x0 + ROTATE_CROP])


def test_rotate_output_size_and_window_check(rng):
    img = make_scene(400, 380, seed=8)
    out = rotate(img, 30.0)
    assert (out.width, out.height) == (ROTATE_CROP, ROTATE_CROP)
    with pytest.raises(WindowOutOfBounds):
        rotate(random_image(rng, 100, 100), 10.0)


def test_zoom_factor_one_is_identity(rng):
    img = random_image(rng, 13, 9)
    assert zoom(img, 1.0) == img


def test_zoom_bad_factor(rng):
    with pytest.raises(InvalidParameter):
        zoom(random_image(rng, 8, 8), 0.5)


def test_zoom_magnifies_center():
    # a dark square spanning the central half fills the frame at factor 2
    px = np.full((64, 64, 3), 200, np.uint8)
    px[16:48, 16:48] = 10
    out = zoom(RgbImage(px), 2.0)
    inner = out.pixels[2:-2, 2:-2]
    assert (np.abs(inner.astype(int) - 10) <= 1).all()


def test_pan_output_size_and_bounds():
    img = make_scene(768, 512, seed=9)
    out = pan(img, 0)
    assert (out.width, out.height) == (PAN_WINDOW, PAN_WINDOW)
    assert np.array_equal(out.pixels, img.pixels[:, 128 : 128 + PAN_WINDOW])
    assert pan(img, 128).width == PAN_WINDOW
    with pytest.raises(WindowOutOfBounds):
        pan(img, 129)
    with pytest.raises(WindowOutOfBounds):
        pan(make_scene(500, 500, seed=0), 0)


def test_apply_distortion_deterministic_under_seed():
    img = make_scene(64, 48, seed=10)
    spec = DistortionSpec("salt-pepper", 0.3, seed=99)
    assert apply_distortion(img, spec) == apply_distortion(img, spec)
    other = apply_distortion(img, DistortionSpec("salt-pepper", 0.3, seed=100))
    assert other != apply_distortion(img, spec)


def test_apply_distortion_unknown_kind(rng):
    with pytest.raises(InvalidParameter):
        apply_distortion(random_image(rng, 8, 8), DistortionSpec("sepia", 1.0))


def test_apply_distortion_missing_level(rng):
    with pytest.raises(InvalidParameter):
        apply_distortion(random_image(rng, 8, 8), DistortionSpec("zoom"))


def test_apply_distortion_rotate90_needs_no_level(rng):
    img = random_image(rng, 8, 6)
    assert apply_distortion(img, DistortionSpec("rotate90")) == rotate90(img)


def test_default_grids_are_defined():
    for kind, family in FAMILIES.items():
        if kind == "rotate90":
            assert family.default_grid is None
        else:
            assert len(family.default_grid) >= 9
            assert family.identity_level is not None


def test_derive_seed_is_deterministic_and_spread():
    assert derive_seed(7, 3) == derive_seed(7, 3)
    seeds = {derive_seed(7, i) for i in range(64)}
    assert len(seeds) == 64
