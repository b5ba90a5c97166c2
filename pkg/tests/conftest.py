import numpy as np
import pytest

from quatdmd.qmatrix import QuaternionMatrix


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_quaternion(rng):
    from quatdmd.quaternion import Quaternion
    return Quaternion(*rng.standard_normal(4))


def random_qmatrix(rng, rows, cols):
    return QuaternionMatrix.random(rows, cols, rng)


def make_gradient_background(height=64, width=64):
    """Deterministic smooth RGB background image."""
    yy, xx = np.mgrid[0:height, 0:width]
    img = np.empty((height, width, 3), dtype=np.uint8)
    img[..., 0] = (xx * 255) // max(width - 1, 1)
    img[..., 1] = (yy * 255) // max(height - 1, 1)
    img[..., 2] = ((xx + yy) * 255) // max(width + height - 2, 1)
    return img


def make_moving_square_video(n_frames=50, height=64, width=64, square=8,
                             color=(210, 40, 40), row=28, start_col=2):
    """Static gradient background with a colored square sliding one pixel
    per frame.  Returns (frames, background): frames is (m, H, W, 3) uint8
    and background is the clean plate the foreground was pasted over."""
    background = make_gradient_background(height, width)
    frames = np.repeat(background[None], n_frames, axis=0)
    for t in range(n_frames):
        c = start_col + t
        frames[t, row:row + square, c:c + square] = color
    return frames, background


def make_static_video(n_frames=12, height=16, width=16):
    background = make_gradient_background(height, width)
    return np.repeat(background[None], n_frames, axis=0), background
