"""Background-estimate quality metrics.

All comparisons take a ground-truth RGB image and a candidate of the same
size.  Four of the six metrics see only the BT.601 luma plane
(0.299 R + 0.587 G + 0.114 B, weights summing to one): AGE, pEPs, pCEPs,
and PSNR.  MS-SSIM is computed on luma as well; CQM mixes the PSNR of the
luma plane with the PSNRs of the two chroma planes.

AGE     mean absolute luma difference.
pEPs    fraction of pixels whose |luma difference| strictly exceeds tau.
pCEPs   fraction whose in-image 4-neighbors are all error pixels too.
PSNR    10 log10(255^2 / MSE) on luma, capped at 100 dB.
MS-SSIM multi-scale structural similarity, 11x11 Gaussian window
        (sigma 1.5), K1 = 0.01, K2 = 0.03, L = 255.
CQM     0.9449 PSNR_Y + 0.0551 (PSNR_U + PSNR_V) / 2 in BT.601 YUV.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
from scipy.signal import fftconvolve

from .errors import ShapeMismatchError

__all__ = ["MetricsReport", "evaluate_pair", "age", "peps", "pceps",
           "psnr", "msssim", "cqm"]

_LUMA = np.array([0.299, 0.587, 0.114])
# BT.601 chroma rows of the RGB -> YUV transform
_U_ROW = np.array([-0.14713, -0.28886, 0.436])
_V_ROW = np.array([0.615, -0.51499, -0.10001])
_PSNR_CAP = 100.0
_MSSSIM_WEIGHTS = np.array([0.0448, 0.2856, 0.3001, 0.2363, 0.1333])
_WINDOW_SIZE = 11
_WINDOW_SIGMA = 1.5
_K1, _K2, _L = 0.01, 0.03, 255.0


@dataclass
class MetricsReport:
    age: float
    peps: float
    pceps: float
    msssim: float
    psnr: float
    cqm: float
    threshold_tau: float

    def as_dict(self) -> dict:
        return asdict(self)


def _check_pair(gt, candidate) -> tuple[np.ndarray, np.ndarray]:
    out = []
    for name, img in (("ground truth", gt), ("candidate", candidate)):
        arr = np.asarray(img)
        if arr.ndim != 3 or arr.shape[2] != 3:
            raise ShapeMismatchError(
                f"{name} must be (H, W, 3), got shape {arr.shape}")
        arr = arr.astype(np.float64)
        if not np.all(np.isfinite(arr)) or arr.min() < 0 or arr.max() > 255:
            raise ValueError(f"{name} values must lie in [0, 255]")
        out.append(arr)
    if out[0].shape != out[1].shape:
        raise ShapeMismatchError(
            f"image sizes differ: {out[0].shape} vs {out[1].shape}")
    return out[0], out[1]


def _luma(img: np.ndarray) -> np.ndarray:
    return img @ _LUMA


def age(gt, candidate) -> float:
    """Average gray-level error: mean |luma difference|."""
    gt, candidate = _check_pair(gt, candidate)
    return float(np.mean(np.abs(_luma(gt) - _luma(candidate))))


def _error_mask(gt, candidate, tau) -> np.ndarray:
    return np.abs(_luma(gt) - _luma(candidate)) > tau


def peps(gt, candidate, tau: float = 20.0) -> float:
    """Fraction of error pixels (|luma difference| strictly above tau)."""
    gt, candidate = _check_pair(gt, candidate)
    return float(np.mean(_error_mask(gt, candidate, tau)))


def pceps(gt, candidate, tau: float = 20.0) -> float:
    """Fraction of clustered error pixels.

    An error pixel counts only when every 4-neighbor inside the image is an
    error pixel too, so stray single-pixel errors are ignored.
    """
    gt, candidate = _check_pair(gt, candidate)
    err = _error_mask(gt, candidate, tau)
    # neighbors beyond the border are vacuously errors
    padded = np.pad(err, 1, constant_values=True)
    clustered = (err
                 & padded[:-2, 1:-1] & padded[2:, 1:-1]
                 & padded[1:-1, :-2] & padded[1:-1, 2:])
    return float(np.mean(clustered))


def _psnr_from_mse(mse: float) -> float:
    if mse <= 0.0:
        return _PSNR_CAP
    return float(min(_PSNR_CAP, 10.0 * np.log10(_L * _L / mse)))


def psnr(gt, candidate) -> float:
    """Peak signal-to-noise ratio of the luma plane, capped at 100 dB."""
    gt, candidate = _check_pair(gt, candidate)
    diff = _luma(gt) - _luma(candidate)
    return _psnr_from_mse(float(np.mean(diff * diff)))


def cqm(gt, candidate) -> float:
    """Color quality measure: luma PSNR weighted 0.9449 against the mean
    chroma PSNR weighted 0.0551."""
    gt, candidate = _check_pair(gt, candidate)
    psnr_y = _psnr_from_mse(float(np.mean((_luma(gt) - _luma(candidate)) ** 2)))
    chroma = []
    for row in (_U_ROW, _V_ROW):
        diff = gt @ row - candidate @ row
        chroma.append(_psnr_from_mse(float(np.mean(diff * diff))))
    return float(0.9449 * psnr_y + 0.0551 * (chroma[0] + chroma[1]) / 2.0)


def _gaussian_window() -> np.ndarray:
    half = (_WINDOW_SIZE - 1) / 2.0
    coords = np.arange(_WINDOW_SIZE) - half
    g = np.exp(-(coords ** 2) / (2.0 * _WINDOW_SIGMA ** 2))
    window = np.outer(g, g)
    return window / window.sum()


_WINDOW = _gaussian_window()


def _ssim_and_cs(img1: np.ndarray, img2: np.ndarray) -> tuple[float, float]:
    c1 = (_K1 * _L) ** 2
    c2 = (_K2 * _L) ** 2
    mu1 = fftconvolve(img1, _WINDOW, mode="valid")
    mu2 = fftconvolve(img2, _WINDOW, mode="valid")
    mu1_sq, mu2_sq, mu12 = mu1 * mu1, mu2 * mu2, mu1 * mu2
    sigma1_sq = fftconvolve(img1 * img1, _WINDOW, mode="valid") - mu1_sq
    sigma2_sq = fftconvolve(img2 * img2, _WINDOW, mode="valid") - mu2_sq
    sigma12 = fftconvolve(img1 * img2, _WINDOW, mode="valid") - mu12
    cs_map = (2.0 * sigma12 + c2) / (sigma1_sq + sigma2_sq + c2)
    ssim_map = ((2.0 * mu12 + c1) / (mu1_sq + mu2_sq + c1)) * cs_map
    return float(np.mean(ssim_map)), float(np.mean(cs_map))


def _halve(img: np.ndarray) -> np.ndarray:
    h, w = (img.shape[0] // 2) * 2, (img.shape[1] // 2) * 2
    trimmed = img[:h, :w]
    return 0.25 * (trimmed[0::2, 0::2] + trimmed[0::2, 1::2]
                   + trimmed[1::2, 0::2] + trimmed[1::2, 1::2])


def msssim(gt, candidate) -> float:
    """Multi-scale structural similarity of the luma planes.

    Uses as many of the five standard scales as the image allows (the luma
    plane must cover the 11x11 window after each 2x2 halving), with the
    standard weights renormalized over the scales used.
    """
    gt, candidate = _check_pair(gt, candidate)
    img1, img2 = _luma(gt), _luma(candidate)
    min_dim = min(img1.shape)
    if min_dim < _WINDOW_SIZE:
        raise ShapeMismatchError(
            f"image too small for the {_WINDOW_SIZE}x{_WINDOW_SIZE} window: "
            f"{img1.shape}")
    n_scales = 1
    while n_scales < _MSSSIM_WEIGHTS.size and (min_dim // 2 ** n_scales) >= _WINDOW_SIZE:
        n_scales += 1
    weights = _MSSSIM_WEIGHTS[:n_scales] / _MSSSIM_WEIGHTS[:n_scales].sum()

    score = 1.0
    for s in range(n_scales):
        ssim_mean, cs_mean = _ssim_and_cs(img1, img2)
        if s < n_scales - 1:
            score *= max(cs_mean, 0.0) ** weights[s]
            img1, img2 = _halve(img1), _halve(img2)
        else:
            score *= max(ssim_mean, 0.0) ** weights[s]
    return float(score)


def evaluate_pair(gt, candidate, tau: float = 20.0) -> MetricsReport:
    """All six metrics for one image pair."""
    return MetricsReport(
        age=age(gt, candidate),
        peps=peps(gt, candidate, tau),
        pceps=pceps(gt, candidate, tau),
        msssim=msssim(gt, candidate),
        psnr=psnr(gt, candidate),
        cqm=cqm(gt, candidate),
        threshold_tau=float(tau),
    )
