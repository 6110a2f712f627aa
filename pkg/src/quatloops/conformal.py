"""Position matrices X, their bars and the 8x8 conformal block embedding.

A point ``(x, y, z, t)`` with a chosen time axis ``e_k e_4`` is written as

    X = x e2e3 + y e1e3 + z e1e2 + t e_k e4

and ``Xbar`` is the same combination of barred bivectors.  The conformal
object is ``Phi = [[X, X Xbar], [I4, Xbar]]``; translations act on it by
conjugation with the unipotent ``T = [[I4, C], [0, I4]]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .clifford import CATALOG, TIME_AXES, BasisCatalog, normalize_label
from .numeric import ShapeError, blocks

#: spatial coordinate -> bivector slot
SPATIAL_SLOTS = {"x": "23", "y": "13", "z": "12"}

_I4 = np.eye(4, dtype=complex)
_Z4 = np.zeros((4, 4), dtype=complex)


def time_label(axis: str) -> str:
    try:
        return TIME_AXES[axis]
    except KeyError:
        raise ValueError(f"time axis must be one of {sorted(TIME_AXES)}, not {axis!r}") from None


@dataclass(frozen=True)
class SpacetimePoint:
    x: float
    y: float
    z: float
    t: float
    time_axis: str = "e3e4"

    def __post_init__(self):
        time_label(self.time_axis)
        if not all(np.isfinite([self.x, self.y, self.z, self.t])):
            raise ValueError("coordinates must be finite")

    def coefficients(self) -> dict[str, float]:
        """Bivector label -> coefficient."""
        return {"23": self.x, "13": self.y, "12": self.z, time_label(self.time_axis): self.t}


@dataclass(frozen=True)
class ConformalPoint:
    X: np.ndarray
    Xbar: np.ndarray
    Phi: np.ndarray

    @classmethod
    def from_blocks(cls, X, Xbar) -> "ConformalPoint":
        X = np.asarray(X, dtype=complex)
        Xbar = np.asarray(Xbar, dtype=complex)
        return cls(X, Xbar, blocks(X, X @ Xbar, _I4, Xbar))

    @property
    def XXbar(self) -> np.ndarray:
        return self.Phi[:4, 4:]


@dataclass(frozen=True)
class ShiftVector:
    c23: float = 0.0
    c13: float = 0.0
    c12: float = 0.0
    c_time: float = 0.0
    time_axis: str = "e3e4"

    def matrix(self, cat: BasisCatalog = CATALOG) -> np.ndarray:
        return (self.c23 * cat.biv["23"] + self.c13 * cat.biv["13"] + self.c12 * cat.biv["12"]
                + self.c_time * cat.biv[time_label(self.time_axis)])

    def __add__(self, other: "ShiftVector") -> "ShiftVector":
        if self.time_axis != other.time_axis:
            raise ValueError("cannot add shifts along different time axes")
        return ShiftVector(self.c23 + other.c23, self.c13 + other.c13, self.c12 + other.c12,
                           self.c_time + other.c_time, self.time_axis)


def combine(coeffs: Mapping[str, float], barred: bool = False, cat: BasisCatalog = CATALOG) -> np.ndarray:
    """``sum coeffs[label] * B_label`` (or its barred counterpart)."""
    out = np.zeros((4, 4), dtype=complex)
    for label, c in coeffs.items():
        if c != 0.0:
            out += c * cat.basis(normalize_label(label), barred)
    return out


def from_coefficients(x_coeffs: Mapping[str, float], xbar_coeffs: Mapping[str, float] | None = None,
                      cat: BasisCatalog = CATALOG) -> ConformalPoint:
    """Conformal point from bivector coefficient maps; ``xbar_coeffs`` defaults to ``x_coeffs``."""
    if xbar_coeffs is None:
        xbar_coeffs = x_coeffs
    return ConformalPoint.from_blocks(combine(x_coeffs, False, cat), combine(xbar_coeffs, True, cat))


def make_point(p: SpacetimePoint, cat: BasisCatalog = CATALOG) -> ConformalPoint:
    return from_coefficients(p.coefficients(), cat=cat)


def translation(c: ShiftVector, cat: BasisCatalog = CATALOG) -> tuple[np.ndarray, np.ndarray]:
    """``(T, T^-1)`` for the shift ``c``."""
    m = c.matrix(cat)
    return blocks(_I4, m, _Z4, _I4), blocks(_I4, -m, _Z4, _I4)


def shift(phi: ConformalPoint, c: ShiftVector, cat: BasisCatalog = CATALOG) -> ConformalPoint:
    """Conjugate ``Phi`` by the translation ``T``.

    With ``T = [[I, C], [0, I]]`` the result is again of the form
    ``[[X', X' Xbar'], [I, Xbar']]`` with ``X' = X + C`` and
    ``Xbar' = Xbar - C``.
    """
    t, tinv = translation(c, cat)
    out = t @ phi.Phi @ tinv
    return ConformalPoint(out[:4, :4].copy(), out[4:, 4:].copy(), out)


def vconj(phi: ConformalPoint | np.ndarray, V, Vd) -> np.ndarray:
    """``V Phi Vd - Phi``."""
    p = phi.Phi if isinstance(phi, ConformalPoint) else np.asarray(phi, dtype=complex)
    V = np.asarray(V, dtype=complex)
    Vd = np.asarray(Vd, dtype=complex)
    if V.shape != p.shape or Vd.shape != p.shape:
        raise ShapeError(f"V {V.shape} and Vd {Vd.shape} must match Phi {p.shape}")
    return V @ p @ Vd - p


def printed_xxbar(axis: str, x: float, y: float, z: float, t: float) -> np.ndarray:
    """The printed closed form of ``X Xbar`` for the given time axis.

    ``zeta = i x - y``.  These displays are cross-checks only; see
    :func:`display_mismatches`.
    """
    i = 1j
    zeta = i * x - y
    zb = np.conj(zeta)
    if axis == "e1e4":
        rows = [
            [0, 0, (t + zeta) ** 2 - z ** 2, -2 * i * y * z],
            [0, 0, 2 * i * y * z, -(t - zb) ** 2 + z ** 2],
            [(t - zb) ** 2 - z ** 2, -2 * i * y * z, 0, 0],
            [2 * i * y * z, -(t + zeta) ** 2 + z ** 2, 0, 0],
        ]
    elif axis == "e2e4":
        w = 2 * (t - i * y) * z
        rows = [
            [0, 0, (i * t - zeta) ** 2 - z ** 2, w],
            [0, 0, -w, -(i * t - zb) ** 2 + z ** 2],
            [(i * t - zeta) ** 2 - z ** 2, w, 0, 0],
            [-w, -(i * t - zeta) ** 2 + z ** 2, 0, 0],
        ]
    elif axis == "e3e4":
        rows = [
            [0, 0, zeta ** 2 - t ** 2 - z ** 2, -2 * i * (t * x + y * z)],
            [0, 0, -2 * i * (t * x - y * z), -zeta ** 2 + t ** 2 + z ** 2],
            [zeta ** 2 - t ** 2 - z ** 2, -2 * i * (t * x + y * z), 0, 0],
            [-2 * i * (t * x - y * z), -zeta ** 2 + t ** 2 + z ** 2, 0, 0],
        ]
    else:
        time_label(axis)
        raise AssertionError("unreachable")
    return np.array(rows, dtype=complex)


def display_mismatches(axis: str, x: float, y: float, z: float, t: float,
                       tol: float = 1e-12) -> list[tuple[int, int]]:
    """Entries ``(row, col)`` where the printed ``X Xbar`` differs from the computed one."""
    got = make_point(SpacetimePoint(x, y, z, t, axis)).XXbar
    want = printed_xxbar(axis, x, y, z, t)
    bad = np.argwhere(np.abs(got - want) > tol * max(1.0, float(np.abs(got).max())))
    return [(int(r), int(c)) for r, c in bad]


#: entries of the printed displays found not to match the algebraic product
DISPLAY_TYPOS = {"e1e4": (), "e2e4": ((2, 0),), "e3e4": ((1, 3), (2, 0))}
