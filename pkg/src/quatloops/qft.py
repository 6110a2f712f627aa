"""Quaternion Fourier transforms and related scalar formulas.

Quaternion-valued arrays carry the components ``(r, i, j, k)`` on their last
axis.  All transforms are direct sums on finite uniform grids; inverses carry
the ``1/N`` normalisation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .quaternion import I, J, Quaternion, axis_exp, qexp, qmul, qmul_arrays

DELTA_LAMBDA_POINTS = 32


def _pure_unit(q: Quaternion, name: str, tol: float = 1e-12) -> Quaternion:
    if abs(q.r) > tol or abs(q.norm2() - 1.0) > tol:
        raise ValueError(f"{name} must be a pure unit quaternion, got {q}")
    return q


def _qarray(h) -> np.ndarray:
    a = np.asarray(h, dtype=float)
    if a.shape[-1:] != (4,):
        raise ValueError(f"quaternion arrays need a trailing axis of 4, got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("quaternion array contains NaN or infinite entries")
    return a


def left_matrix(q) -> np.ndarray:
    """Real 4x4 matrices ``L`` with ``L(q) p = q p`` (broadcast over leading axes)."""
    r, i, j, k = np.moveaxis(np.asarray(q, dtype=float), -1, 0)
    return np.stack([
        np.stack([r, -i, -j, -k], -1),
        np.stack([i, r, -k, j], -1),
        np.stack([j, k, r, -i], -1),
        np.stack([k, -j, i, r], -1),
    ], -2)


def right_matrix(q) -> np.ndarray:
    """Real 4x4 matrices ``R`` with ``R(q) p = p q``."""
    r, i, j, k = np.moveaxis(np.asarray(q, dtype=float), -1, 0)
    return np.stack([
        np.stack([r, -i, -j, -k], -1),
        np.stack([i, r, k, -j], -1),
        np.stack([j, -k, r, i], -1),
        np.stack([k, j, -i, r], -1),
    ], -2)


# ---------------------------------------------------------------------------
# quadratic phase


@dataclass(frozen=True)
class QPKernelParams:
    a: float
    b: float
    c: float
    d: Quaternion = Quaternion()
    e: Quaternion = Quaternion()


def _dot(p: Quaternion, q: Quaternion) -> float:
    return p.r * q.r + p.i * q.i + p.j * q.j + p.k * q.k


def quadratic_phase(p: QPKernelParams, x: Quaternion, w: Quaternion) -> Quaternion:
    """``a|x|^2 + b x.w + c|w|^2 + d.x + e.w`` as a real quaternion."""
    val = (p.a * x.norm2() + p.b * _dot(x, w) + p.c * w.norm2() + _dot(p.d, x) + _dot(p.e, w))
    return Quaternion(float(val))


# ---------------------------------------------------------------------------
# two-sided transform


def _kernel(axis: Quaternion, n: int, sign: float) -> np.ndarray:
    """``exp(sign * axis * 2 pi a b / n)`` for all ``a, b``; shape (n, n, 4)."""
    idx = np.arange(n)
    return axis_exp(axis, sign * 2.0 * np.pi * np.outer(idx, idx) / n)


def qft2(h, f: Quaternion = I, g: Quaternion = J) -> np.ndarray:
    """Two-sided transform ``sum_{m,n} e^{-f 2pi m u/M} h[m,n] e^{-g 2pi n v/N}``."""
    _pure_unit(f, "f")
    _pure_unit(g, "g")
    h = _qarray(h)
    if h.ndim != 3:
        raise ValueError(f"expected an (M, N, 4) array, got {h.shape}")
    M, N, _ = h.shape
    left = left_matrix(_kernel(f, M, -1.0))     # (u, m, 4, 4)
    right = right_matrix(_kernel(g, N, -1.0))   # (n, v, 4, 4)
    tmp = np.einsum("umab,mnb->una", left, h)
    return np.einsum("nvab,unb->uva", right, tmp)


def iqft2(hh, f: Quaternion = I, g: Quaternion = J) -> np.ndarray:
    """Inverse of :func:`qft2`."""
    _pure_unit(f, "f")
    _pure_unit(g, "g")
    hh = _qarray(hh)
    M, N, _ = hh.shape
    left = left_matrix(_kernel(f, M, 1.0))
    right = right_matrix(_kernel(g, N, 1.0))
    tmp = np.einsum("muab,uvb->mva", left, hh)
    return np.einsum("vnab,mvb->mna", right, tmp) / (M * N)


def energy(h) -> float:
    return float(np.sum(_qarray(h) ** 2))


# ---------------------------------------------------------------------------
# short-time transform


def hann(n: int) -> np.ndarray:
    """Periodic Hann window (constant overlap-add at hop ``n/2``)."""
    return 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(n) / n)


def _window(window, length: int | None = None) -> np.ndarray:
    if isinstance(window, str):
        if length is None:
            raise ValueError("a named window needs a length")
        if window == "hann":
            w = hann(length)
        elif window in ("rect", "boxcar"):
            w = np.ones(length)
        else:
            raise ValueError(f"unknown window {window!r}")
    else:
        w = np.asarray(window, dtype=float)
    if w.ndim != 1 or w.size == 0:
        raise ValueError("window must be a non-empty 1-D array")
    if not np.any(w != 0.0):
        raise ValueError("window is identically zero")
    return w


@dataclass(frozen=True)
class STFTResult:
    """Frames ``X[m, k]`` (shape ``(M, L, 4)``) and what is needed to invert them."""

    frames: np.ndarray
    window: np.ndarray
    hop: int
    length: int
    pad: int
    axis: Quaternion

    @property
    def frequencies(self) -> np.ndarray:
        L = self.window.size
        return 2.0 * np.pi * np.arange(L) / L


def _phase(axis: Quaternion, n_abs: np.ndarray, L: int, sign: float) -> np.ndarray:
    """``exp(sign * axis * w_k * n)`` for frequencies ``w_k = 2 pi k / L``; shape (..., L, 4)."""
    k = np.arange(L)
    return axis_exp(axis, sign * 2.0 * np.pi * n_abs[..., None] * k / L)


def stft(x, window="hann", hop: int | None = None, nperseg: int | None = None,
         axis: Quaternion = I) -> STFTResult:
    """Discrete short-time transform ``X[m, w] = sum_n x[n] w[n - m hop] e^{-axis w n}``.

    The exponential multiplies from the right and ``n`` is the absolute
    sample index, so a frame's phase refers to the start of the signal.  The
    signal is zero padded by one window length at both ends so every sample
    is covered by full frames.
    """
    _pure_unit(axis, "axis")
    x = _qarray(x)
    if x.ndim != 2:
        raise ValueError(f"expected an (N, 4) signal, got {x.shape}")
    w = _window(window, nperseg if nperseg is not None else (x.shape[0] if isinstance(window, str) else None))
    L = w.size
    if L > x.shape[0]:
        raise ValueError(f"window length {L} exceeds signal length {x.shape[0]}")
    hop = L // 2 if hop is None else int(hop)
    if hop < 1:
        raise ValueError("hop must be positive")
    pad = L
    xp = np.concatenate([np.zeros((pad, 4)), x, np.zeros((pad, 4))])
    nframes = (xp.shape[0] - L) // hop + 1
    starts = np.arange(nframes) * hop
    idx = starts[:, None] + np.arange(L)[None, :]
    seg = xp[idx] * w[None, :, None]                       # (M, L, 4)
    ph = _phase(axis, (idx - pad).astype(float), L, -1.0)  # (M, n, k, 4)
    prod = qmul_arrays(seg[:, :, None, :], ph)             # x[n] e^{-axis w_k n}
    return STFTResult(prod.sum(axis=1), w, hop, x.shape[0], pad, axis)


def istft(res: STFTResult) -> np.ndarray:
    """Invert :func:`stft` by per-frame inversion and window-normalised overlap-add."""
    X = res.frames
    w = res.window
    L = w.size
    M = X.shape[0]
    starts = np.arange(M) * res.hop
    idx = starts[:, None] + np.arange(L)[None, :]
    ph = _phase(res.axis, (idx - res.pad).astype(float), L, 1.0)  # (M, n, k, 4)
    # x[n] w[n - m hop] = (1/L) sum_k X[m, k] e^{+axis w_k n}
    gated = qmul_arrays(X[:, None, :, :], ph).sum(axis=2) / L     # (M, L, 4)
    total = res.length + 2 * res.pad
    acc = np.zeros((total, 4))
    wsum = np.zeros(total)
    for m in range(M):
        acc[idx[m]] += gated[m] * w[:, None]
        wsum[idx[m]] += w * w
    core = slice(res.pad, res.pad + res.length)
    if np.any(wsum[core] <= 1e-12):
        raise ValueError("window and hop leave samples uncovered")
    return acc[core] / wsum[core, None]


# ---------------------------------------------------------------------------
# delta-rule demonstration


@dataclass(frozen=True)
class DeltaDemo:
    commuting_residual: float
    noncommuting_gap: float
    argmax: tuple[float, float]


def exp_product_gap(u: Quaternion, v: Quaternion, lam: float, lam2: float) -> float:
    """``|e^{-u lam} e^{+v lam2} - e^{-u lam + v lam2}|``."""
    lhs = qmul(qexp(u * -lam), qexp(v * lam2))
    rhs = qexp(u * -lam + v * lam2)
    return (lhs - rhs).norm()


def delta_demo(b: float = 1.0, axes: tuple[Quaternion, Quaternion] = (I, J), grid: int = 16) -> DeltaDemo:
    """Fixed-axis delta rule versus the failure of exponent addition for two axes.

    ``commuting_residual``: with the single axis ``u = axes[0]`` the discrete
    kernel ``K(x, y) = (1/N) sum_w e^{-u b x w} e^{+u b y w}`` (``w`` on the
    ``N``-point frequency grid) is compared with the identity; the value is
    the off-impulse energy plus the squared deviation on the diagonal.

    ``noncommuting_gap``: the largest :func:`exp_product_gap` over a
    32-point grid of ``lam, lam2`` in ``[-pi, pi]`` for the two axes.
    """
    if grid < 8:
        raise ValueError("grid must be at least 8")
    u = _pure_unit(axes[0], "axes[0]")
    v = _pure_unit(axes[1], "axes[1]")
    n = np.arange(grid)
    om = 2.0 * np.pi * n / grid
    fwd = axis_exp(u, -b * np.outer(n, om))  # (x, w, 4)
    bwd = axis_exp(u, b * np.outer(om, n))   # (w, y, 4)
    K = qmul_arrays(fwd[:, :, None, :], bwd[None, :, :, :]).sum(axis=1) / grid
    eye = np.zeros_like(K)
    eye[n, n, 0] = 1.0
    residual = float(np.sum((K - eye) ** 2))

    lam = np.linspace(-np.pi, np.pi, DELTA_LAMBDA_POINTS)
    best, arg = 0.0, (0.0, 0.0)
    for a in lam:
        for c in lam:
            gap = exp_product_gap(u, v, float(a), float(c))
            if gap > best:
                best, arg = gap, (float(a), float(c))
    return DeltaDemo(residual, best, arg)


# ---------------------------------------------------------------------------
# scalar formulas


def c_I(I_: int, j: float) -> float:
    if I_ < 0:
        raise ValueError("I must be non-negative")
    if I_ == 0:
        return math.cos(j)
    if j == 0:
        raise ValueError("c_I is singular at j = 0 for I > 0")
    return math.cos(j) - (2.0 * I_ / j) * math.sin(j)


def d_I(I_: int, j: float) -> float:
    if I_ < 0:
        raise ValueError("I must be non-negative")
    if I_ == 0:
        return math.sin(j)
    if j == 0:
        raise ValueError("d_I is singular at j = 0 for I > 0")
    return (1.0 - 2.0 * I_ / j ** 2) * math.sin(j) + (2.0 * I_ / j) * math.cos(j)


def l_functions(I_: int, jvec: Quaternion) -> Quaternion:
    """``L_I(j.e) = c_I(j) + (j.e / j) d_I(j)`` for a pure quaternion ``jvec``."""
    if abs(jvec.r) > 1e-12:
        raise ValueError("jvec must be a pure quaternion")
    j = jvec.norm()
    if j == 0.0:
        if I_ > 0:
            raise ValueError("L_I is singular at j = 0 for I > 0")
        return Quaternion(1.0)
    return Quaternion(c_I(I_, j)) + jvec * (d_I(I_, j) / j)


def boson_polar(R: float, Theta: float, th1: float, th2: float) -> tuple[float, float, float, float]:
    """``(phi0, phi1, phi2, phi3)`` from the Hopf-type polar coordinates."""
    c, s = math.cos(Theta / 2.0), math.sin(Theta / 2.0)
    return (R * math.cos(th1) * c, R * math.cos(th2) * s, R * math.sin(th2) * s, R * math.sin(th1) * c)


def jacobian(R, Theta):
    """Volume element ``(R^3 / 4) sin(Theta)``."""
    return np.asarray(R) ** 3 / 4.0 * np.sin(Theta)


def ball_volume_mc(samples: int = 1_000_000, seed: int = 7, radius: float = 1.0) -> tuple[float, float]:
    """Monte Carlo volume of the 4-ball through :func:`jacobian`; returns ``(estimate, std_error)``."""
    rng = np.random.default_rng(seed)
    R = rng.uniform(0.0, radius, samples)
    Th = rng.uniform(0.0, np.pi, samples)
    box = radius * np.pi * (2.0 * np.pi) ** 2
    vals = jacobian(R, Th) * box
    return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(samples))


def riesz_kernels(x: float, y: float) -> tuple[float, float]:
    r = math.hypot(x, y)
    if r == 0.0:
        raise ValueError("Riesz kernels are singular at the origin")
    d = 2.0 * math.pi * r ** 3
    return x / d, y / d


# ---------------------------------------------------------------------------
# kinetic energy eigencheck

# H_kin = -(1/6) [2 e1 (d1 d3 - d0 d2) + 2 e2 (d0 d1 + d2 d3) + e3 (d0 d0 + d3 d3 - d1 d1 - d2 d2)]
_H_TERMS = (
    (1, 2.0, ((1, 3, 1.0), (0, 2, -1.0))),
    (2, 2.0, ((0, 1, 1.0), (2, 3, 1.0))),
    (3, 1.0, ((0, 0, 1.0), (3, 3, 1.0), (1, 1, -1.0), (2, 2, -1.0))),
)


@dataclass(frozen=True)
class KineticReport:
    eigenvalue: Quaternion
    magnitude: float
    formula_full: float     # |p|^2 / 6
    formula_printed: float  # (p0^2 + p1^2 + p3^2) / 6
    residual: float         # |H Psi - Psi lambda_exact|
    matches: str            # "full", "printed", "both" or "neither"


def _psi(p, phi, qe: Quaternion) -> np.ndarray:
    lam = float(np.dot(p, phi))
    return math.cos(lam) / (2.0 * math.pi) * qe.as_array()


def _second(f, phi, a: int, b: int, h: float) -> np.ndarray:
    e = np.eye(4)
    if a == b:
        return (f(phi + h * e[a]) - 2.0 * f(phi) + f(phi - h * e[a])) / h ** 2
    return (f(phi + h * e[a] + h * e[b]) - f(phi + h * e[a] - h * e[b])
            - f(phi - h * e[a] + h * e[b]) + f(phi - h * e[a] - h * e[b])) / (4.0 * h ** 2)


def apply_hkin(f, phi, h: float) -> np.ndarray:
    """``H_kin f`` at ``phi`` by central differences; units multiply from the left."""
    out = np.zeros(4)
    for unit, weight, pairs in _H_TERMS:
        d2 = sum(s * _second(f, phi, a, b, h) for a, b, s in pairs)
        e = np.zeros(4)
        e[unit] = 1.0
        out += -(1.0 / 6.0) * weight * qmul_arrays(e, d2)
    return out


def kinetic_exact(p, qe: Quaternion = Quaternion(1.0)) -> Quaternion:
    """Right eigenvalue ``conj(qe) w qe / 6`` with ``w`` the image of ``p`` under the operator symbol."""
    p0, p1, p2, p3 = (float(v) for v in p)
    w = Quaternion(0.0, 2 * (p1 * p3 - p0 * p2), 2 * (p0 * p1 + p2 * p3), p0 ** 2 + p3 ** 2 - p1 ** 2 - p2 ** 2)
    u = qe / qe.norm()
    return qmul(qmul(u.conj(), w), u) / 6.0


def kinetic_check(p, grid_step: float = 1e-3, qe: Quaternion = Quaternion(1.0), phi=None,
                  rtol: float = 1e-4) -> KineticReport:
    """Numeric right eigenvalue ``Psi^{-1} (H_kin Psi)`` of the even wavefunction."""
    p = np.asarray(p, dtype=float)
    phi = np.zeros(4) if phi is None else np.asarray(phi, dtype=float)
    f = lambda ph: _psi(p, ph, qe)  # noqa: E731
    hpsi = apply_hkin(f, phi, grid_step)
    psi = Quaternion.from_array(f(phi))
    lam = qmul(psi.inverse(), Quaternion.from_array(hpsi))
    exact = kinetic_exact(p, qe)
    resid = (Quaternion.from_array(hpsi) - qmul(psi, exact)).norm()
    full = float(p @ p) / 6.0
    printed = float(p[0] ** 2 + p[1] ** 2 + p[3] ** 2) / 6.0
    mag = lam.norm()
    scale = max(full, printed, 1e-300)
    hit_full = abs(mag - full) <= rtol * scale
    hit_printed = abs(mag - printed) <= rtol * scale
    matches = {(True, True): "both", (True, False): "full", (False, True): "printed"}.get(
        (hit_full, hit_printed), "neither")
    return KineticReport(lam, mag, full, printed, resid, matches)
