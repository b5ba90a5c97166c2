"""Scalar quaternion arithmetic.

A quaternion is q = w + x*i + y*j + z*k with the Hamilton product rules
i*i = j*j = k*k = i*j*k = -1, i*j = k = -j*i, j*k = i = -k*j, k*i = j = -i*k.
The product is associative but not commutative.  All components are Python
floats (IEEE double).  ``Quaternion`` is an immutable value type; every
operation returns a new instance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NonPrincipalLogError

__all__ = [
    "Quaternion",
    "ONE",
    "I",
    "J",
    "K",
    "multiply",
    "conjugate",
    "norm",
    "inverse",
    "exp",
    "log",
]


@dataclass(frozen=True)
class Quaternion:
    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    def __post_init__(self):
        # normalize component types once so equality and hashing are float-exact
        object.__setattr__(self, "w", float(self.w))
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        object.__setattr__(self, "z", float(self.z))

    # -- algebra -----------------------------------------------------------

    def __add__(self, other: "Quaternion") -> "Quaternion":
        if not isinstance(other, Quaternion):
            return NotImplemented
        return Quaternion(self.w + other.w, self.x + other.x,
                          self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Quaternion") -> "Quaternion":
        if not isinstance(other, Quaternion):
            return NotImplemented
        return Quaternion(self.w - other.w, self.x - other.x,
                          self.y - other.y, self.z - other.z)

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            p, q = self, other
            return Quaternion(
                p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
                p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
                p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
                p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
            )
        if isinstance(other, (int, float)):
            s = float(other)
            return Quaternion(self.w * s, self.x * s, self.y * s, self.z * s)
        return NotImplemented

    def __rmul__(self, other):
        # real scalars commute with everything; quaternion*quaternion never
        # reaches __rmul__
        if isinstance(other, (int, float)):
            return self.__mul__(other)
        return NotImplemented

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm(self) -> float:
        # hypot stays accurate when components over/underflow when squared
        return math.hypot(self.w, self.x, self.y, self.z)

    def vector_norm(self) -> float:
        return math.hypot(self.x, self.y, self.z)

    def inverse(self) -> "Quaternion":
        n = self.norm()
        if n == 0.0:
            raise ValueError("zero quaternion has no inverse")
        return self.conjugate() * (1.0 / (n * n))

    @property
    def is_pure(self) -> bool:
        return self.w == 0.0

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.w, self.x, self.y, self.z)


ONE = Quaternion(1.0, 0.0, 0.0, 0.0)
I = Quaternion(0.0, 1.0, 0.0, 0.0)
J = Quaternion(0.0, 0.0, 1.0, 0.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


def multiply(p: Quaternion, q: Quaternion) -> Quaternion:
    """Hamilton product p*q (order matters)."""
    return p * q


def conjugate(q: Quaternion) -> Quaternion:
    return q.conjugate()


def norm(q: Quaternion) -> float:
    return q.norm()


def inverse(q: Quaternion) -> Quaternion:
    return q.inverse()


def exp(q: Quaternion) -> Quaternion:
    """Quaternion exponential.

    e^q = e^w * (cos|v| + (v/|v|) sin|v|) where v is the vector part.  A zero
    vector part degenerates to the real exponential.
    """
    m = math.exp(q.w)
    v = q.vector_norm()
    if v == 0.0:
        return Quaternion(m, 0.0, 0.0, 0.0)
    s = m * math.sin(v) / v
    return Quaternion(m * math.cos(v), s * q.x, s * q.y, s * q.z)


def log(q: Quaternion) -> Quaternion:
    """Principal quaternion logarithm.

    log q = ln|q| + (v/|v|) * atan2(|v|, w).  The two-argument arctangent
    keeps the angle correct in every half-plane, including w < 0.  The zero
    quaternion is a domain error; a negative real quaternion has no principal
    logarithm because every axis through -1 is equally valid.
    """
    n = q.norm()
    if n == 0.0:
        raise ValueError("zero quaternion has no logarithm")
    v = q.vector_norm()
    if v == 0.0:
        if q.w < 0.0:
            raise NonPrincipalLogError(
                "negative real quaternion: rotation axis is undefined")
        return Quaternion(math.log(q.w), 0.0, 0.0, 0.0)
    s = math.atan2(v, q.w) / v
    return Quaternion(math.log(n), s * q.x, s * q.y, s * q.z)
