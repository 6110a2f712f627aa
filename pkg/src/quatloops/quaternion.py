"""Quaternion arithmetic, polar form, the orthogonal 2D planes split and
3D rotation helpers.

Scalar quaternions are :class:`Quaternion` values.  Array code (the Fourier
transforms) uses real arrays whose last axis holds ``(r, i, j, k)``; see
:func:`qmul_arrays`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Quaternion:
    r: float = 0.0
    i: float = 0.0
    j: float = 0.0
    k: float = 0.0

    @classmethod
    def from_array(cls, a) -> "Quaternion":
        r, i, j, k = (float(x) for x in a)
        return cls(r, i, j, k)

    def as_array(self) -> np.ndarray:
        return np.array([self.r, self.i, self.j, self.k])

    def __iter__(self):
        return iter((self.r, self.i, self.j, self.k))

    def __add__(self, other):
        if not isinstance(other, Quaternion):
            other = Quaternion(float(other))
        return Quaternion(self.r + other.r, self.i + other.i, self.j + other.j, self.k + other.k)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, Quaternion):
            other = Quaternion(float(other))
        return Quaternion(self.r - other.r, self.i - other.i, self.j - other.j, self.k - other.k)

    def __rsub__(self, other):
        return Quaternion(float(other)) - self

    def __neg__(self):
        return Quaternion(-self.r, -self.i, -self.j, -self.k)

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return qmul(self, other)
        s = float(other)
        return Quaternion(self.r * s, self.i * s, self.j * s, self.k * s)

    def __rmul__(self, other):
        s = float(other)
        return Quaternion(self.r * s, self.i * s, self.j * s, self.k * s)

    def __truediv__(self, other):
        s = float(other)
        return Quaternion(self.r / s, self.i / s, self.j / s, self.k / s)

    def conj(self) -> "Quaternion":
        return Quaternion(self.r, -self.i, -self.j, -self.k)

    def norm2(self) -> float:
        return self.r * self.r + self.i * self.i + self.j * self.j + self.k * self.k

    def norm(self) -> float:
        return math.sqrt(self.norm2())

    def inverse(self) -> "Quaternion":
        n2 = self.norm2()
        if n2 == 0.0:
            raise ZeroDivisionError("zero quaternion has no inverse")
        return self.conj() / n2

    def vector(self) -> np.ndarray:
        return np.array([self.i, self.j, self.k])

    def is_pure(self, tol: float = 1e-12) -> bool:
        return abs(self.r) <= tol

    def isclose(self, other: "Quaternion", tol: float = 1e-12) -> bool:
        return (self - other).norm() <= tol


ONE = Quaternion(1.0)
I = Quaternion(0.0, 1.0)
J = Quaternion(0.0, 0.0, 1.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)

AXES = {"i": I, "j": J, "k": K}


def qmul(a: Quaternion, b: Quaternion) -> Quaternion:
    """Hamilton product ``a b``."""
    return Quaternion(
        a.r * b.r - a.i * b.i - a.j * b.j - a.k * b.k,
        a.r * b.i + a.i * b.r + a.j * b.k - a.k * b.j,
        a.r * b.j - a.i * b.k + a.j * b.r + a.k * b.i,
        a.r * b.k + a.i * b.j - a.j * b.i + a.k * b.r,
    )


def qmul_arrays(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Broadcast Hamilton product over arrays with a trailing axis of 4."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    ar, ai, aj, ak = np.moveaxis(a, -1, 0)
    br, bi, bj, bk = np.moveaxis(b, -1, 0)
    return np.stack(
        [
            ar * br - ai * bi - aj * bj - ak * bk,
            ar * bi + ai * br + aj * bk - ak * bj,
            ar * bj - ai * bk + aj * br + ak * bi,
            ar * bk + ai * bj - aj * bi + ak * br,
        ],
        axis=-1,
    )


def qexp(q: Quaternion) -> Quaternion:
    """Exponential of a quaternion via the polar formula."""
    v = q.vector()
    theta = float(np.linalg.norm(v))
    scale = math.exp(q.r)
    if theta == 0.0:
        return Quaternion(scale)
    s = math.sin(theta) / theta
    return Quaternion(scale * math.cos(theta), *(scale * s * v))


def axis_exp(axis: Quaternion, theta):
    """``exp(axis * theta)`` for a pure unit ``axis``, vectorised over ``theta``.

    Returns an array of shape ``theta.shape + (4,)``.
    """
    theta = np.asarray(theta, dtype=float)
    out = np.empty(theta.shape + (4,))
    out[..., 0] = np.cos(theta)
    s = np.sin(theta)
    out[..., 1] = axis.i * s
    out[..., 2] = axis.j * s
    out[..., 3] = axis.k * s
    return out


def polar(q: Quaternion, tol: float = 1e-9) -> tuple[float, Quaternion]:
    """Split a unit quaternion as ``cos(alpha) + mu sin(alpha)``.

    ``alpha`` lies in ``[0, pi]`` and ``mu`` is a pure unit quaternion.  For a
    real ``q`` (``sin(alpha) = 0``) the axis is undefined and ``mu = k`` is
    returned by convention.
    """
    if abs(q.norm() - 1.0) > tol:
        raise ValueError(f"polar form needs a unit quaternion, |q| = {q.norm()!r}")
    v = q.vector()
    s = float(np.linalg.norm(v))
    alpha = math.atan2(s, q.r)
    if s == 0.0:
        return alpha, K
    return alpha, Quaternion(0.0, *(v / s))


def ops_split(q: Quaternion) -> tuple[Quaternion, Quaternion]:
    """Orthogonal 2D planes split ``q_pm = (q pm i q j) / 2``."""
    iqj = qmul(qmul(I, q), J)
    return (q + iqj) * 0.5, (q - iqj) * 0.5


def ops_split_closed_form(q: Quaternion) -> tuple[Quaternion, Quaternion]:
    """``q_pm = {q_r pm q_k + i (q_i -+ q_j)} (1 pm k) / 2``."""
    plus = qmul(Quaternion(q.r + q.k, q.i - q.j), Quaternion(0.5, 0, 0, 0.5))
    minus = qmul(Quaternion(q.r - q.k, q.i + q.j), Quaternion(0.5, 0, 0, -0.5))
    return plus, minus


def dyson_check(a: complex, b: complex, c: complex, d: complex) -> np.ndarray:
    """``conj(q) tau3 q`` for ``q = [[a, b], [c, d]]``.

    Here ``conj(q) = [[d, -b], [-c, a]]`` and ``tau3 = diag(i, -i)``, giving
    ``i [[bc + ad, 2bd], [-2ac, -bc - ad]]``.  The result is always
    traceless; it is anti-Hermitian when ``q`` has quaternion form
    ``c = -conj(b), d = conj(a)``.
    """
    return 1j * np.array([[b * c + a * d, 2 * b * d], [-2 * a * c, -b * c - a * d]], dtype=complex)


def cross_matrix(x) -> np.ndarray:
    """``A[x]`` with ``A[x] w = x cross w``."""
    x1, x2, x3 = (float(v) for v in x)
    return np.array([[0.0, -x3, x2], [x3, 0.0, -x1], [-x2, x1, 0.0]])


def rot_exp(x) -> np.ndarray:
    """Rotation ``exp A[x]`` about ``x`` by angle ``|x|`` (Rodrigues form)."""
    a = cross_matrix(x)
    ell = float(np.linalg.norm(np.asarray(x, dtype=float)))
    if ell == 0.0:
        return np.eye(3)
    return np.eye(3) + (math.sin(ell) / ell) * a + ((1.0 - math.cos(ell)) / ell ** 2) * (a @ a)


def rotation_of(q: Quaternion, tol: float = 1e-9) -> np.ndarray:
    """Matrix of ``w -> q w conj(q)`` for a unit quaternion ``q``."""
    if abs(q.norm() - 1.0) > tol:
        raise ValueError(f"rotation needs a unit quaternion, |q| = {q.norm()!r}")
    r, i, j, k = q
    return np.array([
        [1 - 2 * (j * j + k * k), 2 * (i * j - r * k), 2 * (i * k + r * j)],
        [2 * (i * j + r * k), 1 - 2 * (i * i + k * k), 2 * (j * k - r * i)],
        [2 * (i * k - r * j), 2 * (j * k + r * i), 1 - 2 * (i * i + j * j)],
    ])


def rot_compose_check(q1: Quaternion, q2: Quaternion) -> float:
    """Frobenius deviation ``|R[q1 q2] - R[q1] R[q2]|``."""
    return float(np.linalg.norm(rotation_of(qmul(q1, q2)) - rotation_of(q1) @ rotation_of(q2)))


def hysteresis_point(ell: float) -> tuple[float, float]:
    r = rot_exp((ell, 0.0, 0.0))
    return float(r[1, 2]), float(r[2, 1])


def hysteresis_curve(n: int) -> list[tuple[float, float, float]]:
    """``(ell, f23, f32)`` for ``n`` angles spread evenly over ``[0, 2 pi]``.

    ``f23`` and ``f32`` are the (2,3) and (3,2) entries of the rotation about
    the first axis, taken from :func:`rot_exp`.
    """
    if n < 2:
        raise ValueError("need at least two samples")
    out = []
    for ell in np.linspace(0.0, 2.0 * math.pi, n):
        f23, f32 = hysteresis_point(float(ell))
        out.append((float(ell), f23, f32))
    return out


def sinsurface(u: float, v: float) -> tuple[float, float, float]:
    return math.sin(u), math.sin(v), math.sin(u + v)
