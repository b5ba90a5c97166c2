"""Frame sequences as pure-quaternion matrices.

A stack of m RGB frames of size H x W becomes an n x m quaternion matrix
with n = H*W: pixel (R, G, B) is the pure quaternion 0 + R*i + G*j + B*k,
and column l is the row-major flattening of frame l.  Channel values stay
in [0, 255]; the scalar plane is identically zero on encode and whatever
survives a reconstruction is reported back as a diagnostic on decode.
"""

from __future__ import annotations

import glob
import os
import re
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import SequenceLoadError, ShapeMismatchError
from .qmatrix import QuaternionMatrix

__all__ = ["FrameStack", "DecodedFrame", "encode_frames", "frames_array",
           "load_sequence", "load_image", "write_png", "decode_column",
           "decode_image", "downsample", "trim_static_margins"]

_IMAGE_EXTENSIONS = {".png", ".jpg", ".jpeg", ".bmp"}


class DecodedFrame(NamedTuple):
    image: np.ndarray            # (H, W, 3) uint8
    scalar_residual: float       # max |scalar part| of the decoded column


@dataclass
class FrameStack:
    """Pure-quaternion encoding of a frame sequence.

    ``data`` is n x m with n = width * height; ``source_ids`` names each
    column (file stems for loaded sequences).
    """

    width: int
    height: int
    dt: float
    data: QuaternionMatrix
    source_ids: list[str] = field(default_factory=list)

    def __post_init__(self):
        n = self.width * self.height
        if self.data.rows != n:
            raise ShapeMismatchError(
                f"data has {self.data.rows} rows, expected "
                f"{self.width}x{self.height} = {n}")
        if not self.source_ids:
            self.source_ids = [f"frame{l:04d}" for l in range(self.data.cols)]
        if len(self.source_ids) != self.data.cols:
            raise ShapeMismatchError("need one source id per frame")
        if np.any(self.data.w != 0.0):
            raise ValueError("frame data must be pure quaternions")
        if self.data.a.size:
            lo = min(self.data.x.min(), self.data.y.min(), self.data.z.min())
            hi = max(self.data.x.max(), self.data.y.max(), self.data.z.max())
            if lo < 0.0 or hi > 255.0:
                raise ValueError(
                    f"channel values outside [0, 255]: {lo}..{hi}")

    @property
    def frame_count(self) -> int:
        return self.data.cols

    @property
    def pixel_count(self) -> int:
        return self.data.rows


def encode_frames(frames, dt: float = 1.0,
                  source_ids: Sequence[str] | None = None) -> FrameStack:
    """Encode an (m, H, W, 3) uint8 array as a FrameStack."""
    frames = np.asarray(frames)
    if frames.ndim != 4 or frames.shape[3] != 3:
        raise ShapeMismatchError(
            f"expected (m, H, W, 3) frames, got shape {frames.shape}")
    m, h, w, _ = frames.shape
    flat = frames.reshape(m, h * w, 3).astype(np.float64)
    data = QuaternionMatrix.from_parts(np.zeros((h * w, m)), flat[..., 0].T,
                                       flat[..., 1].T, flat[..., 2].T)
    return FrameStack(width=w, height=h, dt=dt, data=data,
                      source_ids=list(source_ids) if source_ids else [])


def frames_array(stack: FrameStack) -> np.ndarray:
    """Back to (m, H, W, 3) float64 channel planes."""
    m, h, w = stack.frame_count, stack.height, stack.width
    return np.stack([comp.T.reshape(m, h, w)
                     for comp in (stack.data.x, stack.data.y, stack.data.z)],
                    axis=-1)


def _natural_key(name: str):
    return tuple(int(part) if part.isdigit() else part.lower()
                 for part in re.split(r"(\d+)", name))


def _list_frame_files(source: str) -> list[str]:
    if os.path.isdir(source):
        names = [os.path.join(source, f) for f in os.listdir(source)
                 if os.path.splitext(f)[1].lower() in _IMAGE_EXTENSIONS]
    else:
        names = [f for f in glob.glob(source) if os.path.isfile(f)]
    return sorted(names, key=lambda p: _natural_key(os.path.basename(p)))


def load_image(path: str) -> np.ndarray:
    """One image as (H, W, 3) uint8; alpha and palettes are normalized away."""
    try:
        with Image.open(path) as img:
            return np.asarray(img.convert("RGB"), dtype=np.uint8)
    except (UnidentifiedImageError, OSError, ValueError) as exc:
        raise SequenceLoadError(f"cannot decode image {path!r}: {exc}") from exc


def write_png(path: str, image: np.ndarray) -> None:
    image = np.asarray(image, dtype=np.uint8)
    Image.fromarray(image, mode="RGB").save(path, format="PNG")


def load_sequence(source: str, frame_range: tuple[int, int] | None = None,
                  stride: int = 1, dt: float = 1.0) -> FrameStack:
    """Load a directory or glob of frames in natural filename order.

    ``frame_range`` selects zero-based positions (a, b) in the sorted
    listing, both ends included; ``stride`` then keeps every stride-th
    frame of that window.
    """
    if stride < 1:
        raise ValueError(f"stride must be positive, got {stride}")
    files = _list_frame_files(source)
    if frame_range is not None:
        a, b = frame_range
        if a < 0 or b < a:
            raise ValueError(f"invalid frame range {a}..{b}")
        files = files[a:b + 1]
    files = files[::stride]
    if not files:
        raise SequenceLoadError(f"no frames matched {source!r}")
    images = [load_image(f) for f in files]
    first = images[0].shape
    for f, img in zip(files, images):
        if img.shape != first:
            raise SequenceLoadError(
                f"frame size mismatch: {f!r} is {img.shape[1]}x{img.shape[0]}, "
                f"expected {first[1]}x{first[0]}")
    ids = [os.path.splitext(os.path.basename(f))[0] for f in files]
    return encode_frames(np.stack(images), dt=dt, source_ids=ids)


def _round_half_away(values: np.ndarray) -> np.ndarray:
    # numpy rounds halves to even; channel math wants 0.5 -> 1, 127.5 -> 128
    return np.sign(values) * np.floor(np.abs(values) + 0.5)


def _fold_channels(x: np.ndarray, y: np.ndarray, z: np.ndarray,
                   width: int, height: int) -> np.ndarray:
    img = np.stack([c.reshape(height, width) for c in (x, y, z)], axis=-1)
    return np.clip(_round_half_away(img), 0.0, 255.0).astype(np.uint8)


def decode_image(column: QuaternionMatrix, width: int, height: int) -> DecodedFrame:
    """Fold an n x 1 quaternion column back into an RGB frame.

    Channels are rounded half away from zero and clamped to [0, 255].  The
    scalar plane cannot carry color; its largest magnitude is returned so
    callers can judge how pure the column stayed.
    """
    if column.cols != 1 or column.rows != width * height:
        raise ShapeMismatchError(
            f"expected a {width * height} x 1 column, got {column.shape}")
    residual = float(np.max(np.abs(column.w), initial=0.0))
    image = _fold_channels(column.x[:, 0], column.y[:, 0], column.z[:, 0],
                           width, height)
    return DecodedFrame(image=image, scalar_residual=residual)


def decode_column(stack: FrameStack, index: int) -> DecodedFrame:
    return decode_image(stack.data.column(index), stack.width, stack.height)


def downsample(stack: FrameStack, factor: int) -> FrameStack:
    """Block-average spatial downsampling by an integer factor.

    Output size is ceil(dim / factor); edge blocks average whatever pixels
    exist.  Block means are rounded half away from zero so the result stays
    8-bit valued.
    """
    if int(factor) != factor or factor < 1:
        raise ValueError(f"factor must be a positive integer, got {factor}")
    factor = int(factor)
    if factor == 1:
        return stack
    frames = frames_array(stack)
    h, w = stack.height, stack.width
    idx_h = np.arange(0, h, factor)
    idx_w = np.arange(0, w, factor)
    sums = np.add.reduceat(np.add.reduceat(frames, idx_h, axis=1), idx_w, axis=2)
    sizes_h = np.diff(np.append(idx_h, h))
    sizes_w = np.diff(np.append(idx_w, w))
    counts = np.outer(sizes_h, sizes_w)[None, :, :, None]
    means = np.clip(_round_half_away(sums / counts), 0.0, 255.0)
    return encode_frames(means.astype(np.uint8), dt=stack.dt,
                         source_ids=stack.source_ids)


def trim_static_margins(stack: FrameStack, tolerance: float = 0.0) -> FrameStack:
    """Drop leading and trailing frames that do not change over time.

    A boundary frame is static when its largest per-channel difference to
    its temporal neighbor is at most ``tolerance``.  The trailing margin is
    trimmed first, then the leading one, and at least two frames always
    survive (a fully static stack keeps its first two frames).
    """
    if tolerance < 0:
        raise ValueError(f"tolerance must be nonnegative, got {tolerance}")
    m = stack.frame_count
    if m <= 2:
        return stack
    frames = frames_array(stack)
    diffs = np.max(np.abs(np.diff(frames, axis=0)), axis=(1, 2, 3))
    first, last = 0, m - 1
    while last - first + 1 > 2 and diffs[last - 1] <= tolerance:
        last -= 1
    while last - first + 1 > 2 and diffs[first] <= tolerance:
        first += 1
    if first == 0 and last == m - 1:
        return stack
    keep = range(first, last + 1)
    return FrameStack(width=stack.width, height=stack.height, dt=stack.dt,
                      data=stack.data.take_columns(keep),
                      source_ids=[stack.source_ids[i] for i in keep])
