"""Quaternion matrix decompositions built on the complex adjoint.

Each decomposition runs LAPACK on the 2M x 2N complex adjoint and folds the
result back to quaternion form.  The adjoint's spectrum carries a two-fold
structure: its singular values occur in equal pairs, and its eigenvalues in
conjugate pairs, one quaternion object per pair.

Eigenvalues are reported as standard representatives: for every right
eigenvalue class {p^-1 q p} there is exactly one complex member with
nonnegative imaginary part, and that member is returned.  Eigenvectors are
canonicalized by a unit complex phase only; rotating by a general unit
quaternion would conjugate the eigenvalue away from its standard
representative.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    EigenPairingError,
    NonDiagonalizableError,
    ShapeMismatchError,
)
from .qmatrix import QuaternionMatrix, complex_adjoint

__all__ = ["Qsvd", "QEigen", "qsvd", "pseudoinverse", "standard_eigen",
           "spectral_decomposition"]

# relative gap under which adjoint singular values are treated as one
# degenerate group (matches the pair-equality tolerance of the embedding)
_GROUP_RTOL = 1e-10


@dataclass
class Qsvd:
    """Reduced quaternion SVD: Q = U diag(sigma) V^H.

    ``u`` is M x r and ``v`` is N x r with H-orthonormal columns; ``sigma``
    holds the r strictly positive singular values in descending order, where
    r is the numerical rank.
    """

    u: QuaternionMatrix
    sigma: np.ndarray
    v: QuaternionMatrix

    @property
    def rank(self) -> int:
        return self.sigma.size

    def truncated(self, r: int) -> "Qsvd":
        if not 0 <= r <= self.rank:
            raise ValueError(f"cannot truncate rank {self.rank} to {r}")
        idx = range(r)
        return Qsvd(self.u.take_columns(idx), self.sigma[:r].copy(),
                    self.v.take_columns(idx))


@dataclass
class QEigen:
    """Eigendecomposition result: values[s] is the standard representative
    of the s-th right-eigenvalue class and vectors' column s is a unit
    H-norm eigenvector for it."""

    values: np.ndarray
    vectors: QuaternionMatrix


def _extract_pair(columns: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray]:
    # fold length-2m adjoint columns back to quaternion pairs: the top block
    # is the a-plane and the negated conjugate of the bottom block is the
    # b-plane; the embedding of the result reproduces the input exactly
    return columns[:m], -np.conj(columns[m:])


def _hdot(ua, ub, va, vb) -> tuple[complex, complex]:
    # quaternion inner product u^H v of two column pairs, as (alpha, beta)
    # with value alpha + beta*j
    alpha = np.vdot(ua, va) + np.conj(np.vdot(ub, vb))
    beta = np.vdot(ua, vb) - np.conj(np.vdot(ub, va))
    return alpha, beta


def _right_scale(a, b, alpha, beta):
    # column * quaternion scalar: (a + b j)(alpha + beta j)
    return a * alpha - b * np.conj(beta), a * beta + b * np.conj(alpha)


def _pair_norm(a, b) -> float:
    return float(np.sqrt(np.sum(np.abs(a) ** 2) + np.sum(np.abs(b) ** 2)))


def _mgs_lockstep(va, vb, ua, ub, keep: int):
    """Pivoted quaternion Gram-Schmidt on the V candidates, with every
    elementary operation mirrored onto the U candidates.

    Inside a degenerate singular-value group the map v -> Q v / sigma is an
    isometry, so identical right-multiplications keep the U side consistent
    (Q v_kept = sigma u_kept) without ever dividing by sigma.
    """
    va, vb, ua, ub = va.copy(), vb.copy(), ua.copy(), ub.copy()
    alive = list(range(va.shape[1]))
    kept: list[int] = []
    for _ in range(keep):
        norms = [_pair_norm(va[:, c], vb[:, c]) for c in alive]
        best = int(np.argmax(norms))
        if norms[best] < 1e-6:
            raise np.linalg.LinAlgError(
                "degenerate singular subspace lost quaternion rank")
        c = alive.pop(best)
        # reorthogonalize the winner against what is already kept, then
        # normalize; one extra pass guards against cancellation
        for k in kept:
            al, be = _hdot(va[:, k], vb[:, k], va[:, c], vb[:, c])
            da, db = _right_scale(va[:, k], vb[:, k], al, be)
            va[:, c] -= da
            vb[:, c] -= db
            dua, dub = _right_scale(ua[:, k], ub[:, k], al, be)
            ua[:, c] -= dua
            ub[:, c] -= dub
        inv = 1.0 / _pair_norm(va[:, c], vb[:, c])
        for arr in (va, vb, ua, ub):
            arr[:, c] *= inv
        kept.append(c)
        for other in alive:
            al, be = _hdot(va[:, c], vb[:, c], va[:, other], vb[:, other])
            da, db = _right_scale(va[:, c], vb[:, c], al, be)
            va[:, other] -= da
            vb[:, other] -= db
            dua, dub = _right_scale(ua[:, c], ub[:, c], al, be)
            ua[:, other] -= dua
            ub[:, other] -= dub
    return va[:, kept], vb[:, kept], ua[:, kept], ub[:, kept]


def _empty_qsvd(m: int, n: int) -> Qsvd:
    return Qsvd(QuaternionMatrix.zeros(m, 0), np.zeros(0),
                QuaternionMatrix.zeros(n, 0))


def qsvd(q: QuaternionMatrix) -> Qsvd:
    """Reduced quaternion singular value decomposition.

    The adjoint's complex SVD yields every quaternion singular value twice;
    one quaternion singular vector pair is folded out of each duplicate
    group.  For simple singular values this is plain column extraction; for
    repeated ones LAPACK may return an arbitrary complex basis of the merged
    subspace, so the fold runs a quaternion Gram-Schmidt over the whole
    group.  Singular values at or below max(M, N) * eps * sigma_1 are
    treated as zero, so a zero matrix yields rank 0.
    """
    m, n = q.shape
    if m == 0 or n == 0:
        return _empty_qsvd(m, n)
    chi = complex_adjoint(q)
    cu, s, cvh = np.linalg.svd(chi, full_matrices=False)
    if s.size == 0 or s[0] <= 0.0:
        return _empty_qsvd(m, n)
    tol = max(m, n) * np.finfo(np.float64).eps * s[0]
    r = int(np.sum(s > tol)) // 2
    if r == 0:
        return _empty_qsvd(m, n)
    sig = 0.5 * (s[0:2 * r:2] + s[1:2 * r:2])

    # split the r retained values into near-equal groups; merging too eagerly
    # is harmless, splitting a true degeneracy is not
    splits = [0]
    for t in range(1, r):
        if sig[t - 1] - sig[t] > _GROUP_RTOL * sig[0]:
            splits.append(t)
    splits.append(r)

    cv = np.conj(cvh.T)
    out_ua, out_ub, out_va, out_vb, out_sig = [], [], [], [], []
    for g in range(len(splits) - 1):
        t0, t1 = splits[g], splits[g + 1]
        cols = np.arange(2 * t0, 2 * t1)
        va, vb = _extract_pair(cv[:, cols], n)
        ua, ub = _extract_pair(cu[:, cols], m)
        va, vb, ua, ub = _mgs_lockstep(va, vb, ua, ub, keep=t1 - t0)
        out_va.append(va)
        out_vb.append(vb)
        out_ua.append(ua)
        out_ub.append(ub)
        out_sig.append(sig[t0:t1])

    u = QuaternionMatrix.from_complex_pair(np.hstack(out_ua), np.hstack(out_ub))
    v = QuaternionMatrix.from_complex_pair(np.hstack(out_va), np.hstack(out_vb))
    return Qsvd(u=u, sigma=np.concatenate(out_sig), v=v)


def pseudoinverse(q: QuaternionMatrix) -> QuaternionMatrix:
    """Moore-Penrose pseudoinverse V diag(1/sigma) U^H (zero matrix maps to
    the zero matrix of the transposed shape)."""
    dec = qsvd(q)
    if dec.rank == 0:
        return QuaternionMatrix.zeros(q.cols, q.rows)
    return dec.v.scale_columns(1.0 / dec.sigma) @ dec.u.conj_transpose()


def _canonical_phase(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # unit complex phase making the dominant complex coordinate of the
    # largest-magnitude component real and positive; complex phases commute
    # with complex eigenvalues, so the standard representative is preserved
    mags = np.abs(a) ** 2 + np.abs(b) ** 2
    p = int(np.argmax(mags))
    ap, bp = a[p], b[p]
    if abs(ap) >= abs(bp):
        z = np.conj(ap) / abs(ap) if ap != 0 else 1.0
    else:
        z = bp / abs(bp)
    a, b = a * z, b * np.conj(z)
    inv = 1.0 / np.sqrt(np.sum(np.abs(a) ** 2) + np.sum(np.abs(b) ** 2))
    return a * inv, b * inv


def standard_eigen(q: QuaternionMatrix) -> QEigen:
    """Standard eigenvalues and right eigenvectors of a square matrix.

    The adjoint's 2M eigenvalues are matched into conjugate pairs (nearest
    match within 1e-7 * ||Q||_F, else :class:`EigenPairingError`); each pair
    contributes its nonnegative-imaginary member and the quaternion fold of
    the corresponding adjoint eigenvector.  Results are sorted by real part,
    then imaginary part.
    """
    m, n = q.shape
    if m != n:
        raise ShapeMismatchError(f"eigendecomposition needs a square matrix, got {q.shape}")
    if m == 0:
        return QEigen(np.zeros(0, dtype=np.complex128), QuaternionMatrix.zeros(0, 0))
    chi = complex_adjoint(q)
    w, cvec = np.linalg.eig(chi)
    tol = 1e-7 * q.frobenius_norm()

    order = np.lexsort((w.imag, w.real))
    used = np.zeros(2 * m, dtype=bool)
    pairs: list[tuple[int, int]] = []
    for idx in order:
        if used[idx]:
            continue
        used[idx] = True
        free = np.flatnonzero(~used)
        if free.size == 0:
            raise EigenPairingError("odd number of adjoint eigenvalues left unpaired")
        dist = np.abs(w[free] - np.conj(w[idx]))
        j = int(np.argmin(dist))
        if dist[j] > tol:
            raise EigenPairingError(
                f"no conjugate partner for adjoint eigenvalue {w[idx]:g} "
                f"within {tol:g}")
        used[free[j]] = True
        pairs.append((idx, int(free[j])))

    reps = [p if w[p].imag >= w[s].imag else s for p, s in pairs]
    values = w[reps]
    values[values.imag < 0] = values[values.imag < 0].real  # clamp noise
    final = np.argsort(values, kind="stable")  # complex sort: real, then imag
    values = values[final]

    cols_a = np.empty((m, m), dtype=np.complex128)
    cols_b = np.empty((m, m), dtype=np.complex128)
    for out, src in enumerate(np.asarray(reps)[final]):
        a, b = _extract_pair(cvec[:, [src]], m)
        a, b = _canonical_phase(a[:, 0], b[:, 0])
        cols_a[:, out] = a
        cols_b[:, out] = b
    return QEigen(values=values,
                  vectors=QuaternionMatrix.from_complex_pair(cols_a, cols_b))


def spectral_decomposition(q: QuaternionMatrix) -> QEigen:
    """Eigendecomposition with a diagonalizability gate.

    Returns ``QEigen`` with vectors Phi and values Lambda such that
    Q = Phi diag(Lambda) pinv(Phi).  If the smallest singular value of Phi
    is at or below 1e-10 times its largest, the matrix is reported as
    numerically non-diagonalizable; the error carries the condition
    estimate.
    """
    eig = standard_eigen(q)
    if eig.values.size == 0:
        return eig
    s = np.linalg.svd(complex_adjoint(eig.vectors), compute_uv=False)
    smax, smin = float(s[0]), float(s[-1])
    if smin <= 1e-10 * smax:
        cond = smax / smin if smin > 0 else float("inf")
        raise NonDiagonalizableError(
            f"eigenvector matrix numerically singular (condition ~ {cond:.3e})",
            condition=cond)
    return eig
