"""Dynamic mode decomposition in quaternion arithmetic.

A color video becomes one pure-quaternion matrix: pixel (R, G, B) maps to
the quaternion 0 + R*i + G*j + B*k, frames are columns.  Fitting finds a
quaternion operator carrying each frame to the next; its eigenstructure
splits the video into modes evolving as exp(omega t).  The mode whose omega
magnitude is smallest is the content that never changes: the background.

Quaternion products do not commute, so reconstruction must keep the order
mode * (exp(omega t) * amplitude): the scalar exponential multiplies the
amplitude from the left, and the mode multiplies the product from the left.
Swapping any of it changes the result; see ``QuaternionDMD.reconstruct``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import as_quaternion_matrix, resolve_rank
from .errors import InsufficientDataError, LogSingularityError, ShapeMismatchError
from .qlinalg import pseudoinverse, qsvd, spectral_decomposition
from .qmatrix import QuaternionMatrix

__all__ = ["QuaternionDMD", "Separation", "qdmd_fit", "qdmd_reconstruct",
           "separate"]

_LOG_EPS = 1e-12


@dataclass
class Separation:
    """Low-rank / sparse split of a reconstruction.

    ``background + foreground`` is exactly ``reconstruction`` (the
    foreground is stored as that exact complement), and ``reconstruction``
    agrees with ``QuaternionDMD.reconstruct`` at the same times up to
    floating-point addition order.
    """

    background: QuaternionMatrix
    foreground: QuaternionMatrix
    reconstruction: QuaternionMatrix
    background_index: int
    omega_magnitudes: np.ndarray


class QuaternionDMD(BaseEstimator):
    """Exact DMD of quaternion snapshot data.

    Parameters
    ----------
    rank : int, optional
        Truncation rank; default is one less than the snapshot count,
        capped at the numerical rank of the first snapshot matrix.
    dt : float
        Sampling interval; the first snapshot is taken at time 0.

    Attributes
    ----------
    modes_ : QuaternionMatrix, n x r
    eigenvalues_ : (r,) complex ndarray
        Standard eigenvalue representatives (imaginary part >= 0) of the
        reduced operator, sorted by real then imaginary part.
    omegas_ : (r,) complex ndarray
    amplitudes_ : QuaternionMatrix, r x 1
    rank_ : int
    numerical_rank_ : int
    singular_values_ : (rank_,) float ndarray
    """

    def __init__(self, rank=None, dt=1.0):
        self.rank = rank
        self.dt = dt

    def fit(self, X, Y=None):
        X = as_quaternion_matrix(X, "X")
        if Y is None:
            if X.cols < 2:
                raise InsufficientDataError(
                    f"need at least 2 snapshots, got {X.cols}")
            n_snapshots = X.cols
            x_first = X.column(0)
            Y = X.take_columns(range(1, X.cols))
            X = X.take_columns(range(X.cols - 1))
        else:
            Y = as_quaternion_matrix(Y, "Y")
            if X.shape != Y.shape:
                raise ShapeMismatchError(
                    f"paired snapshot matrices must share a shape, got "
                    f"{X.shape} and {Y.shape}")
            if X.cols < 1:
                raise InsufficientDataError("need at least one snapshot pair")
            n_snapshots = X.cols + 1
            x_first = X.column(0)

        dec = qsvd(X)
        numerical_rank = dec.rank
        r = resolve_rank(self.rank, numerical_rank, default_cap=n_snapshots - 1)
        dec = dec.truncated(r)

        lifted = Y @ dec.v.scale_columns(1.0 / dec.sigma)   # Y V Sigma^-1
        core = dec.u.conj_transpose() @ lifted
        eig = spectral_decomposition(core)
        if np.any(np.abs(eig.values) < _LOG_EPS):
            raise LogSingularityError(
                "an eigenvalue is numerically zero; its continuous-time "
                "exponent diverges")

        modes = lifted @ eig.vectors
        amplitudes = pseudoinverse(modes) @ x_first

        self.modes_ = modes
        self.eigenvalues_ = eig.values
        self.omegas_ = np.log(eig.values) / self.dt
        self.amplitudes_ = amplitudes
        self.rank_ = r
        self.numerical_rank_ = numerical_rank
        self.singular_values_ = dec.sigma.copy()
        return self

    def _dynamics(self, times, index=None) -> QuaternionMatrix:
        """Rows of exp(omega_s t) * amplitude_s, the reconstruction order's
        inner product.  Left-multiplying a quaternion by the complex scalar
        z scales both complex planes by z."""
        times = np.atleast_1d(np.asarray(times, dtype=np.float64))
        if index is None:
            omegas = self.omegas_
            ba = self.amplitudes_.a[:, 0]
            bb = self.amplitudes_.b[:, 0]
        else:
            omegas = self.omegas_[[index]]
            ba = self.amplitudes_.a[[index], 0]
            bb = self.amplitudes_.b[[index], 0]
        z = np.exp(np.outer(omegas, times))
        return QuaternionMatrix.from_complex_pair(z * ba[:, None],
                                                  z * bb[:, None])

    def reconstruct(self, times) -> QuaternionMatrix:
        """Reconstruction sum_s mode_s * (exp(omega_s t) * amplitude_s).

        The factors are quaternions; this exact order is part of the model.
        """
        check_is_fitted(self)
        return self.modes_ @ self._dynamics(times)

    def separate(self, times) -> Separation:
        """Split the reconstruction into a static background (the mode with
        the smallest |omega|, ties broken by the largest amplitude) and the
        moving remainder."""
        check_is_fitted(self)
        omega_mags = np.abs(self.omegas_)
        amp_mags = np.sqrt(np.abs(self.amplitudes_.a[:, 0]) ** 2
                           + np.abs(self.amplitudes_.b[:, 0]) ** 2)
        p = int(np.lexsort((-amp_mags, omega_mags))[0])
        reconstruction = self.reconstruct(times)
        background = self.modes_.column(p) @ self._dynamics(times, index=p)
        foreground = reconstruction - background
        # report the sum itself so background + foreground matches it exactly
        return Separation(background=background,
                          foreground=foreground,
                          reconstruction=background + foreground,
                          background_index=p,
                          omega_magnitudes=omega_mags)


def qdmd_fit(X, Y=None, rank=None, dt=1.0) -> QuaternionDMD:
    """Fit a :class:`QuaternionDMD` model in one call."""
    return QuaternionDMD(rank=rank, dt=dt).fit(X, Y)


def qdmd_reconstruct(model: QuaternionDMD, times) -> QuaternionMatrix:
    return model.reconstruct(times)


def separate(model: QuaternionDMD, times) -> Separation:
    return model.separate(times)
