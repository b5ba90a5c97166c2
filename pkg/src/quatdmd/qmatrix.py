"""Dense quaternion matrices via the complex-pair representation.

Every quaternion entry q = w + x*i + y*j + z*k splits uniquely into a pair of
complex numbers, q = a + b*j with a = w + x*i and b = y + z*i.  A quaternion
matrix is therefore stored as two complex128 arrays A and B of the same shape.
The split turns quaternion arithmetic into complex arithmetic through the
identity j*c = conj(c)*j:

    (A1 + B1 j)(A2 + B2 j) = (A1 A2 - B1 conj(B2)) + (A1 B2 + B1 conj(A2)) j

The complex adjoint embeds an M x N quaternion matrix as the 2M x 2N complex
matrix [[A, B], [-conj(B), conj(A)]].  The embedding preserves products,
sums, and conjugate transposes, which is what lets LAPACK do the heavy
lifting for quaternion decompositions.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import MalformedAdjointError, ShapeMismatchError
from .quaternion import Quaternion

__all__ = ["QuaternionMatrix", "complex_adjoint", "from_adjoint"]


def _locked(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


class QuaternionMatrix:
    """Immutable dense quaternion matrix.

    Construct with :meth:`from_parts`, :meth:`from_complex_pair`,
    :meth:`from_real`, :meth:`from_quaternions`, :meth:`zeros`,
    :meth:`identity`, or :meth:`random`.
    """

    __slots__ = ("_a", "_b")

    def __init__(self, a: np.ndarray, b: np.ndarray, *, _trusted: bool = False):
        if not _trusted:
            a = np.array(a, dtype=np.complex128, order="C", copy=True)
            b = np.array(b, dtype=np.complex128, order="C", copy=True)
            if a.ndim != 2 or a.shape != b.shape:
                raise ShapeMismatchError(
                    "complex pair must be two 2-d arrays of equal shape, got "
                    f"{a.shape} and {b.shape}")
        self._a = _locked(a)
        self._b = _locked(b)

    # -- constructors --------------------------------------------------

    @classmethod
    def from_complex_pair(cls, a, b) -> "QuaternionMatrix":
        return cls(a, b)

    @classmethod
    def from_parts(cls, w, x, y, z) -> "QuaternionMatrix":
        w, x, y, z = (np.asarray(p, dtype=np.float64) for p in (w, x, y, z))
        if not (w.shape == x.shape == y.shape == z.shape) or w.ndim != 2:
            raise ShapeMismatchError("component planes must share one 2-d shape")
        return cls(w + 1j * x, y + 1j * z, _trusted=True)

    @classmethod
    def from_real(cls, r) -> "QuaternionMatrix":
        r = np.asarray(r, dtype=np.float64)
        if r.ndim != 2:
            raise ShapeMismatchError("expected a 2-d real array")
        return cls(r.astype(np.complex128), np.zeros_like(r, dtype=np.complex128),
                   _trusted=True)

    @classmethod
    def from_quaternions(cls, rows: Sequence[Sequence[Quaternion]]) -> "QuaternionMatrix":
        w = [[q.w for q in row] for row in rows]
        x = [[q.x for q in row] for row in rows]
        y = [[q.y for q in row] for row in rows]
        z = [[q.z for q in row] for row in rows]
        return cls.from_parts(w, x, y, z)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QuaternionMatrix":
        return cls(np.zeros((rows, cols), dtype=np.complex128),
                   np.zeros((rows, cols), dtype=np.complex128), _trusted=True)

    @classmethod
    def identity(cls, n: int) -> "QuaternionMatrix":
        return cls(np.eye(n, dtype=np.complex128),
                   np.zeros((n, n), dtype=np.complex128), _trusted=True)

    @classmethod
    def diag_complex(cls, values) -> "QuaternionMatrix":
        values = np.asarray(values, dtype=np.complex128)
        return cls(np.diag(values),
                   np.zeros((values.size, values.size), dtype=np.complex128),
                   _trusted=True)

    @classmethod
    def random(cls, rows: int, cols: int, rng: np.random.Generator) -> "QuaternionMatrix":
        parts = rng.standard_normal((4, rows, cols))
        return cls.from_parts(*parts)

    # -- views ----------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self._a.shape

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def a(self) -> np.ndarray:
        """First complex plane w + x*i (read-only)."""
        return self._a

    @property
    def b(self) -> np.ndarray:
        """Second complex plane y + z*i (read-only)."""
        return self._b

    @property
    def w(self) -> np.ndarray:
        return self._a.real

    @property
    def x(self) -> np.ndarray:
        return self._a.imag

    @property
    def y(self) -> np.ndarray:
        return self._b.real

    @property
    def z(self) -> np.ndarray:
        return self._b.imag

    def __getitem__(self, index: tuple[int, int]) -> Quaternion:
        i, j = index
        a = self._a[i, j]
        b = self._b[i, j]
        return Quaternion(a.real, a.imag, b.real, b.imag)

    def __repr__(self) -> str:
        return f"QuaternionMatrix(shape={self.shape})"

    # -- arithmetic -------------------------------------------------------

    def _check_same_shape(self, other: "QuaternionMatrix") -> None:
        if self.shape != other.shape:
            raise ShapeMismatchError(
                f"shape mismatch: {self.shape} vs {other.shape}")

    def __add__(self, other: "QuaternionMatrix") -> "QuaternionMatrix":
        if not isinstance(other, QuaternionMatrix):
            return NotImplemented
        self._check_same_shape(other)
        return QuaternionMatrix(self._a + other._a, self._b + other._b,
                                _trusted=True)

    def __sub__(self, other: "QuaternionMatrix") -> "QuaternionMatrix":
        if not isinstance(other, QuaternionMatrix):
            return NotImplemented
        self._check_same_shape(other)
        return QuaternionMatrix(self._a - other._a, self._b - other._b,
                                _trusted=True)

    def __neg__(self) -> "QuaternionMatrix":
        return QuaternionMatrix(-self._a, -self._b, _trusted=True)

    def __mul__(self, scalar) -> "QuaternionMatrix":
        if not isinstance(scalar, (int, float)):
            return NotImplemented
        s = float(scalar)
        return QuaternionMatrix(self._a * s, self._b * s, _trusted=True)

    __rmul__ = __mul__

    def __matmul__(self, other: "QuaternionMatrix") -> "QuaternionMatrix":
        if not isinstance(other, QuaternionMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ShapeMismatchError(
                f"cannot multiply {self.shape} by {other.shape}")
        a1, b1, a2, b2 = self._a, self._b, other._a, other._b
        a = a1 @ a2 - b1 @ np.conj(b2)
        b = a1 @ b2 + b1 @ np.conj(a2)
        return QuaternionMatrix(a, b, _trusted=True)

    def conj_transpose(self) -> "QuaternionMatrix":
        # entrywise conjugate of a + b*j is conj(a) - b*j, then transpose
        return QuaternionMatrix(np.conj(self._a).T.copy(), (-self._b).T.copy(),
                                _trusted=True)

    def frobenius_norm(self) -> float:
        return float(np.sqrt(np.linalg.norm(self._a) ** 2
                             + np.linalg.norm(self._b) ** 2))

    def scalar_part_norm(self) -> float:
        """Frobenius norm of the real (w) plane alone."""
        return float(np.linalg.norm(self._a.real))

    def column_norms(self) -> np.ndarray:
        return np.sqrt(np.sum(np.abs(self._a) ** 2, axis=0)
                       + np.sum(np.abs(self._b) ** 2, axis=0))

    # -- column manipulation ----------------------------------------------

    def column(self, j: int) -> "QuaternionMatrix":
        return QuaternionMatrix(self._a[:, j:j + 1].copy(),
                                self._b[:, j:j + 1].copy(), _trusted=True)

    def take_columns(self, indices: Iterable[int]) -> "QuaternionMatrix":
        idx = np.asarray(list(indices), dtype=int)
        return QuaternionMatrix(self._a[:, idx].copy(), self._b[:, idx].copy(),
                                _trusted=True)

    def scale_columns(self, factors) -> "QuaternionMatrix":
        """Multiply column j by the real scalar factors[j]."""
        f = np.asarray(factors, dtype=np.float64)
        if f.shape != (self.cols,):
            raise ShapeMismatchError("need one real factor per column")
        return QuaternionMatrix(self._a * f, self._b * f, _trusted=True)

    def right_scale_columns(self, factors) -> "QuaternionMatrix":
        """Right-multiply column j by the complex scalar factors[j].

        Right multiplication by a complex scalar z acts on the pair as
        (a, b) -> (a*z, b*conj(z)) since b*j*z = b*conj(z)*j.
        """
        f = np.asarray(factors, dtype=np.complex128)
        if f.shape != (self.cols,):
            raise ShapeMismatchError("need one complex factor per column")
        return QuaternionMatrix(self._a * f, self._b * np.conj(f), _trusted=True)


def complex_adjoint(q: QuaternionMatrix) -> np.ndarray:
    """Complex adjoint of a quaternion matrix.

    Returns the 2M x 2N complex128 array [[A, B], [-conj(B), conj(A)]].
    The map is a ring homomorphism: it carries quaternion sums, products,
    and conjugate transposes to their complex counterparts.
    """
    a, b = q.a, q.b
    return np.block([[a, b], [-np.conj(b), np.conj(a)]])


def from_adjoint(chi: np.ndarray, tol: float = 1e-10) -> QuaternionMatrix:
    """Invert :func:`complex_adjoint`.

    The bottom block row must mirror the top within ``tol`` (relative to the
    largest entry); otherwise the input is not the adjoint of any quaternion
    matrix and :class:`MalformedAdjointError` is raised.  The result is built
    from the top blocks alone, so a genuine adjoint round-trips exactly.
    """
    chi = np.asarray(chi, dtype=np.complex128)
    if chi.ndim != 2 or chi.shape[0] % 2 or chi.shape[1] % 2:
        raise MalformedAdjointError(
            f"adjoint must be 2-d with even dimensions, got {chi.shape}")
    m, n = chi.shape[0] // 2, chi.shape[1] // 2
    tl, tr = chi[:m, :n], chi[:m, n:]
    bl, br = chi[m:, :n], chi[m:, n:]
    scale = max(1.0, float(np.max(np.abs(chi)))) if chi.size else 1.0
    if (np.max(np.abs(bl + np.conj(tr)), initial=0.0) > tol * scale
            or np.max(np.abs(br - np.conj(tl)), initial=0.0) > tol * scale):
        raise MalformedAdjointError(
            "block symmetry violated: not the adjoint of a quaternion matrix")
    return QuaternionMatrix(tl.copy(), tr.copy(), _trusted=True)
