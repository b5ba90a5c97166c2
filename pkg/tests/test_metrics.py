"""Tests for the image quality metrics."""

import math

import numpy as np
import numpy.testing as npt
import pytest

from quatdmd.errors import ShapeMismatchError
from quatdmd.metrics import (
    MetricsReport,
    age,
    cqm,
    evaluate_pair,
    msssim,
    peps,
    pceps,
    psnr,
)

from reference_metrics import (
    ref_age,
    ref_cqm,
    ref_msssim,
    ref_pceps,
    ref_peps,
    ref_psnr,
)


def random_image(rng, height=16, width=16):
    return rng.integers(0, 256, size=(height, width, 3)).astype(np.float64)


def blue_delta_image(height, width, positions, value):
    """Zeros except a pure-blue bump at the given (row, col) positions.

    The luma of such a pixel is exactly ``0.114 * value`` because the zero
    red and green contributions add exactly.
    """
    img = np.zeros((height, width, 3))
    for i, j in positions:
        img[i, j, 2] = value
    return img


class TestIdentities:
    def test_identical_images(self, rng):
        img = random_image(rng, 32, 32)
        assert age(img, img) == 0.0
        assert peps(img, img) == 0.0
        assert pceps(img, img) == 0.0
        assert psnr(img, img) == 100.0
        assert msssim(img, img) == 1.0
        assert cqm(img, img) == 100.0

    def test_uniform_offset_age(self, rng):
        img = rng.integers(0, 250, size=(24, 24, 3)).astype(np.float64)
        assert age(img, img + 5.0) == pytest.approx(5.0, abs=1e-12)

    def test_age_is_symmetric(self, rng):
        a = random_image(rng)
        b = random_image(rng)
        assert age(a, b) == age(b, a)

    def test_uint8_input_accepted(self, rng):
        img = rng.integers(0, 256, size=(16, 16, 3), dtype=np.uint8)
        assert age(img, img) == 0.0
        assert psnr(img, img) == 100.0


class TestErrorFractions:
    def test_threshold_is_strict(self):
        gt = np.zeros((8, 8, 3))
        cand = blue_delta_image(8, 8, [(i, j) for i in range(8) for j in range(8)], 100.0)
        boundary = 0.114 * 100.0
        assert peps(gt, cand, tau=boundary) == 0.0
        assert peps(gt, cand, tau=np.nextafter(boundary, 0.0)) == 1.0

    def test_default_threshold(self):
        gt = np.zeros((4, 4, 3))
        over = blue_delta_image(4, 4, [(0, 0)], 255.0)     # luma 29.07
        under = blue_delta_image(4, 4, [(0, 0)], 175.0)    # luma 19.95
        assert peps(gt, over) == 1.0 / 16.0
        assert peps(gt, under) == 0.0

    def test_pceps_interior_blob(self):
        gt = np.zeros((8, 8, 3))
        blob = [(i, j) for i in range(2, 5) for j in range(2, 5)]
        cand = blue_delta_image(8, 8, blob, 255.0)
        assert peps(gt, cand) == 9.0 / 64.0
        # only the centre of a 3x3 blob has all four neighbours in error
        assert pceps(gt, cand) == 1.0 / 64.0

    def test_pceps_corner_blob_uses_padding(self):
        gt = np.zeros((8, 8, 3))
        cand = blue_delta_image(8, 8, [(0, 0), (0, 1), (1, 0), (1, 1)], 255.0)
        # out-of-frame neighbours count as errors, so the corner qualifies
        assert pceps(gt, cand) == 1.0 / 64.0
        assert peps(gt, cand) == 4.0 / 64.0

    def test_pceps_isolated_pixel(self):
        gt = np.zeros((8, 8, 3))
        cand = blue_delta_image(8, 8, [(4, 4)], 255.0)
        assert pceps(gt, cand) == 0.0

    def test_pceps_full_error_image(self):
        gt = np.zeros((4, 4, 3))
        cand = np.full((4, 4, 3), 255.0)
        assert peps(gt, cand) == 1.0
        assert pceps(gt, cand) == 1.0

    def test_pceps_never_exceeds_peps(self, rng):
        for _ in range(20):
            a = random_image(rng)
            b = np.clip(a + rng.normal(0.0, 30.0, size=a.shape), 0, 255)
            assert pceps(a, b) <= peps(a, b)


class TestPsnr:
    def test_known_mse(self):
        gt = np.zeros((16, 16, 3))
        cand = blue_delta_image(16, 16,
                                [(i, j) for i in range(16) for j in range(16)],
                                100.0)
        d = 0.114 * 100.0
        expected = 10.0 * math.log10(255.0 ** 2 / d ** 2)
        assert psnr(gt, cand) == pytest.approx(expected, abs=1e-12)

    def test_cap_applies_to_tiny_errors(self):
        gt = np.zeros((8, 8, 3))
        cand = np.zeros((8, 8, 3))
        cand[0, 0, 2] = 1e-6
        assert psnr(gt, cand) == 100.0

    def test_worse_image_scores_lower(self, rng):
        gt = random_image(rng, 32, 32)
        mild = np.clip(gt + rng.normal(0.0, 2.0, size=gt.shape), 0, 255)
        harsh = np.clip(gt + rng.normal(0.0, 40.0, size=gt.shape), 0, 255)
        assert psnr(gt, harsh) < psnr(gt, mild)


class TestMsssim:
    def test_inverted_image_scores_low(self, rng):
        img = random_image(rng, 32, 32)
        assert msssim(img, 255.0 - img) < 0.5

    def test_small_image_rejected(self, rng):
        img = rng.integers(0, 256, size=(10, 16, 3)).astype(np.float64)
        with pytest.raises(ShapeMismatchError):
            msssim(img, img)

    def test_eleven_pixel_image_allowed(self, rng):
        img = rng.integers(0, 256, size=(11, 11, 3)).astype(np.float64)
        assert msssim(img, img) == 1.0

    def test_monotone_under_noise(self, rng):
        gt = random_image(rng, 48, 48)
        mild = np.clip(gt + rng.normal(0.0, 5.0, size=gt.shape), 0, 255)
        harsh = np.clip(gt + rng.normal(0.0, 60.0, size=gt.shape), 0, 255)
        assert msssim(gt, harsh) < msssim(gt, mild)


class TestAgainstReference:
    def test_pointwise_metrics_match(self, rng):
        for _ in range(50):
            a = random_image(rng)
            b = np.clip(a + rng.normal(0.0, 25.0, size=a.shape), 0, 255)
            npt.assert_allclose(age(a, b), ref_age(a, b), atol=1e-9)
            npt.assert_allclose(peps(a, b), ref_peps(a, b), atol=0)
            npt.assert_allclose(pceps(a, b), ref_pceps(a, b), atol=0)
            npt.assert_allclose(psnr(a, b), ref_psnr(a, b), atol=1e-9)
            npt.assert_allclose(cqm(a, b), ref_cqm(a, b), atol=1e-9)

    def test_msssim_single_scale_matches(self, rng):
        for _ in range(10):
            a = random_image(rng)
            b = np.clip(a + rng.normal(0.0, 25.0, size=a.shape), 0, 255)
            npt.assert_allclose(msssim(a, b), ref_msssim(a, b), atol=1e-6)

    def test_msssim_three_scale_matches(self, rng):
        for _ in range(3):
            a = random_image(rng, 48, 48)
            b = np.clip(a + rng.normal(0.0, 25.0, size=a.shape), 0, 255)
            npt.assert_allclose(msssim(a, b), ref_msssim(a, b), atol=1e-6)


class TestValidation:
    def test_shape_mismatch(self, rng):
        a = random_image(rng, 16, 16)
        b = random_image(rng, 16, 17)
        with pytest.raises(ShapeMismatchError):
            age(a, b)

    def test_non_color_rejected(self, rng):
        a = rng.uniform(0, 255, size=(16, 16))
        with pytest.raises(ShapeMismatchError):
            age(a, a)

    def test_out_of_range_rejected(self, rng):
        a = random_image(rng)
        b = a.copy()
        b[0, 0, 0] = 300.0
        with pytest.raises(ValueError):
            age(a, b)

    def test_nan_rejected(self, rng):
        a = random_image(rng)
        b = a.copy()
        b[0, 0, 0] = np.nan
        with pytest.raises(ValueError):
            age(a, b)


class TestEvaluatePair:
    def test_report_matches_individual_metrics(self, rng):
        a = random_image(rng, 24, 24)
        b = np.clip(a + rng.normal(0.0, 20.0, size=a.shape), 0, 255)
        report = evaluate_pair(a, b, tau=15.0)
        assert isinstance(report, MetricsReport)
        assert report.age == age(a, b)
        assert report.peps == peps(a, b, tau=15.0)
        assert report.pceps == pceps(a, b, tau=15.0)
        assert report.psnr == psnr(a, b)
        assert report.cqm == cqm(a, b)
        assert report.msssim == msssim(a, b)
        assert report.threshold_tau == 15.0

    def test_as_dict_keys(self, rng):
        a = random_image(rng)
        report = evaluate_pair(a, a)
        d = report.as_dict()
        assert set(d) == {"age", "peps", "pceps", "msssim", "psnr", "cqm",
                          "threshold_tau"}
        assert d["age"] == 0.0
        assert d["threshold_tau"] == 20.0
