"""Background extraction from frame stacks.

Two drivers share one result type: ``qdmd_background`` fits a quaternion
model to the full color signal, while ``dmd_on_video`` runs the real
baseline either on a luma plane or on each RGB channel independently.
Both pick the background mode by smallest |omega|, breaking ties toward
the largest amplitude, and render the background at t = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dmd import ExactDMD
from .qdmd import QuaternionDMD
from .video import FrameStack, decode_image, frames_array, _fold_channels

__all__ = ["BackgroundResult", "qdmd_background", "dmd_on_video"]

_GRAY_WEIGHTS = np.array([0.2989, 0.5870, 0.1140])


@dataclass
class BackgroundResult:
    """A rendered background plus per-channel model diagnostics.

    ``channels`` maps a channel label ("quaternion", "luma", or
    "red"/"green"/"blue") to plain-Python diagnostics: rank,
    background_index, eigenvalues as [re, im] pairs, omega_magnitudes,
    and amplitude_magnitudes.  The scalar fields are populated only by
    the quaternion driver, whose reconstruction can leak energy into
    the scalar plane.
    """

    image: np.ndarray
    method: str
    channels: dict
    scalar_residual: float | None = None
    scalar_norm_fraction: float | None = None
    foreground_frames: np.ndarray | None = None


def _select_background(omega_magnitudes, amplitude_magnitudes):
    order = np.lexsort((-np.asarray(amplitude_magnitudes),
                        np.asarray(omega_magnitudes)))
    return int(order[0])


def _channel_info(eigenvalues, omega_magnitudes, amplitude_magnitudes, rank):
    return {
        "rank": int(rank),
        "background_index": _select_background(omega_magnitudes,
                                               amplitude_magnitudes),
        "eigenvalues": [[float(v.real), float(v.imag)] for v in eigenvalues],
        "omega_magnitudes": [float(v) for v in omega_magnitudes],
        "amplitude_magnitudes": [float(v) for v in amplitude_magnitudes],
    }


def qdmd_background(stack: FrameStack, rank: int | None = None,
                    want_foreground: bool = False) -> BackgroundResult:
    """Quaternion background extraction: fit, separate, decode at t = 0."""
    model = QuaternionDMD(rank=rank, dt=stack.dt).fit(stack.data)
    times = np.arange(stack.frame_count, dtype=np.float64) * stack.dt
    sep = model.separate(times)

    decoded = decode_image(sep.background.column(0), stack.width, stack.height)

    total = sep.reconstruction.frobenius_norm()
    fraction = sep.reconstruction.scalar_part_norm() / total if total else 0.0

    amp = np.sqrt(np.abs(model.amplitudes_.a[:, 0]) ** 2
                  + np.abs(model.amplitudes_.b[:, 0]) ** 2)
    info = _channel_info(model.eigenvalues_, sep.omega_magnitudes, amp,
                         model.rank_)

    foreground = None
    if want_foreground:
        foreground = np.stack(
            [decode_image(sep.foreground.column(l), stack.width,
                          stack.height).image
             for l in range(stack.frame_count)])

    return BackgroundResult(image=decoded.image, method="qdmd",
                            channels={"quaternion": info},
                            scalar_residual=decoded.scalar_residual,
                            scalar_norm_fraction=float(fraction),
                            foreground_frames=foreground)


def _fit_plane(plane: np.ndarray, rank: int | None, dt: float):
    """Fit the real baseline to one (m, H, W) plane.

    Returns the model, its diagnostics, the background column at t = 0,
    and the per-frame foreground columns.
    """
    m = plane.shape[0]
    data = plane.reshape(m, -1).T
    model = ExactDMD(rank=rank, dt=dt).fit(data)
    info = _channel_info(model.eigenvalues_, np.abs(model.omegas_),
                         np.abs(model.amplitudes_), model.rank_)
    p = info["background_index"]

    times = np.arange(m, dtype=np.float64) * dt
    dynamics = np.exp(model.omegas_[p] * times) * model.amplitudes_[p]
    low = np.outer(model.modes_[:, p], dynamics).real
    foreground = model.reconstruct(times) - low
    return model, info, low[:, 0], foreground


def dmd_on_video(stack: FrameStack, mode: str = "grayscale",
                 rank: int | None = None,
                 want_foreground: bool = False) -> BackgroundResult:
    """Real-baseline background extraction on luma or per RGB channel."""
    if mode not in ("grayscale", "per-channel"):
        raise ValueError(f"mode must be 'grayscale' or 'per-channel', "
                         f"got {mode!r}")
    frames = frames_array(stack)
    h, w = stack.height, stack.width

    if mode == "grayscale":
        planes = {"luma": frames @ _GRAY_WEIGHTS}
        method = "dmd-gray"
    else:
        planes = {"red": frames[..., 0], "green": frames[..., 1],
                  "blue": frames[..., 2]}
        method = "dmd-rgb"

    channels, backgrounds, foregrounds = {}, {}, {}
    for label, plane in planes.items():
        _, info, background, foreground = _fit_plane(plane, rank, stack.dt)
        channels[label] = info
        backgrounds[label] = background
        foregrounds[label] = foreground

    if mode == "grayscale":
        bg = backgrounds["luma"]
        image = _fold_channels(bg, bg, bg, w, h)
    else:
        image = _fold_channels(backgrounds["red"], backgrounds["green"],
                               backgrounds["blue"], w, h)

    foreground_frames = None
    if want_foreground:
        if mode == "grayscale":
            fg = foregrounds["luma"]
            parts = (fg, fg, fg)
        else:
            parts = (foregrounds["red"], foregrounds["green"],
                     foregrounds["blue"])
        foreground_frames = np.stack(
            [_fold_channels(parts[0][:, l], parts[1][:, l], parts[2][:, l],
                            w, h)
             for l in range(stack.frame_count)])

    return BackgroundResult(image=image, method=method, channels=channels,
                            foreground_frames=foreground_frames)
