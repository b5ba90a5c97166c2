"""Exact dynamic mode decomposition over the reals.

Given snapshot pairs y_l = A x_l of an unknown linear operator, the exact
DMD recovers A's dominant eigenstructure from data alone: reduce X by its
SVD, form the rank-r core matrix U^T Y V Sigma^-1, eigendecompose it, and
lift the eigenvectors back through Y V Sigma^-1.  Each mode evolves as
exp(omega t) with omega = log(lambda) / dt, so a mode with |omega| ~ 0 is
content that never moves.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import (
    as_float_matrix,
    check_paired_snapshots,
    require_min_snapshots,
    resolve_rank,
)
from .errors import LogSingularityError, ShapeMismatchError

__all__ = ["ExactDMD", "exact_dmd", "dmd_reconstruct"]

# eigenvalues this small have no usable continuous-time exponent
_LOG_EPS = 1e-12


class ExactDMD(BaseEstimator):
    """Exact DMD of real snapshot data.

    Parameters
    ----------
    rank : int, optional
        Truncation rank.  Default keeps everything the data supports: one
        less than the snapshot count, capped at the numerical rank of X.
        An explicit rank above the numerical rank raises ``RankError``.
    dt : float
        Sampling interval; the first snapshot is taken at time 0.

    Attributes
    ----------
    modes_ : (n, r) complex ndarray
    eigenvalues_ : (r,) complex ndarray
        Discrete-time operator eigenvalues, sorted by real then imaginary
        part.  They come in conjugate pairs because the data is real.
    omegas_ : (r,) complex ndarray
        Continuous-time exponents log(eigenvalue) / dt.
    amplitudes_ : (r,) complex ndarray
        Least-squares projection of the first snapshot onto the modes.
    rank_ : int
        Effective rank after truncation.
    numerical_rank_ : int
    singular_values_ : (rank_,) float ndarray
    """

    def __init__(self, rank=None, dt=1.0):
        self.rank = rank
        self.dt = dt

    def fit(self, X, Y=None):
        X = as_float_matrix(X, "X")
        if Y is None:
            require_min_snapshots(X.shape[1])
            n_snapshots = X.shape[1]
            x_first = X[:, 0]
            X, Y = X[:, :-1], X[:, 1:]
        else:
            Y = as_float_matrix(Y, "Y")
            check_paired_snapshots(X.shape[1], Y.shape[1])
            if X.shape[0] != Y.shape[0]:
                raise ShapeMismatchError(
                    f"X and Y must have equal row counts, got {X.shape[0]} "
                    f"and {Y.shape[0]}")
            n_snapshots = X.shape[1] + 1
            require_min_snapshots(n_snapshots)
            x_first = X[:, 0]

        u, s, vt = np.linalg.svd(X, full_matrices=False)
        tol = max(X.shape) * np.finfo(np.float64).eps * (s[0] if s.size else 0.0)
        numerical_rank = int(np.sum(s > tol))
        r = resolve_rank(self.rank, numerical_rank, default_cap=n_snapshots - 1)

        ur, sr, vr = u[:, :r], s[:r], vt[:r].T
        lifted = (Y @ vr) / sr
        core = ur.T @ lifted
        eigenvalues, w = np.linalg.eig(core)
        # eig returns a real dtype when the spectrum is real; the log of a
        # negative real eigenvalue still needs the complex branch
        eigenvalues = eigenvalues.astype(np.complex128)
        w = w.astype(np.complex128)
        order = np.argsort(eigenvalues, kind="stable")
        eigenvalues, w = eigenvalues[order], w[:, order]
        if np.any(np.abs(eigenvalues) < _LOG_EPS):
            raise LogSingularityError(
                "an eigenvalue is numerically zero; its continuous-time "
                "exponent diverges")

        modes = lifted @ w
        amplitudes, *_ = np.linalg.lstsq(modes, x_first.astype(np.complex128),
                                         rcond=None)

        self.modes_ = modes
        self.eigenvalues_ = eigenvalues
        self.omegas_ = np.log(eigenvalues) / self.dt
        self.amplitudes_ = amplitudes
        self.rank_ = r
        self.numerical_rank_ = numerical_rank
        self.singular_values_ = sr.copy()
        return self

    def reconstruct(self, times) -> np.ndarray:
        """Real-valued reconstruction at the given times.

        Each column is sum_s modes[:, s] * exp(omega_s t) * amplitude_s; the
        imaginary residue of the sum is discarded at the end, never mode by
        mode.
        """
        check_is_fitted(self)
        times = np.atleast_1d(np.asarray(times, dtype=np.float64))
        dynamics = np.exp(np.outer(self.omegas_, times)) * self.amplitudes_[:, None]
        return (self.modes_ @ dynamics).real

    def predict(self, X) -> np.ndarray:
        """Advance states one sampling step with the fitted operator."""
        check_is_fitted(self)
        X = as_float_matrix(X, "X")
        coeffs, *_ = np.linalg.lstsq(self.modes_, X.astype(np.complex128),
                                     rcond=None)
        return (self.modes_ @ (self.eigenvalues_[:, None] * coeffs)).real


def exact_dmd(X, Y=None, rank=None, dt=1.0) -> ExactDMD:
    """Fit an :class:`ExactDMD` model in one call."""
    return ExactDMD(rank=rank, dt=dt).fit(X, Y)


def dmd_reconstruct(model: ExactDMD, times) -> np.ndarray:
    return model.reconstruct(times)
