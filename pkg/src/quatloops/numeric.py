"""Dense complex matrix kernels for small (at most 16x16) matrices.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  The eigenvalue
solver (balancing, Householder Hessenberg reduction, Wilkinson-shifted QR)
and the one-sided Jacobi SVD are written out here rather than delegated to
LAPACK so that the two can be checked against each other and against
determinant oracles in the test suite.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

MAX_DIM = 16

#: relative off-diagonal mass below which a Jacobi pair counts as orthogonal
SVD_TOL = 1e-14
#: QR iteration cap is ``EIG_ITER_FACTOR * dim``
EIG_ITER_FACTOR = 100

_EPS = np.finfo(float).eps


class ShapeError(ValueError):
    """Matrix operands have incompatible or unsupported shapes."""


class ConvergenceError(RuntimeError):
    """An iterative kernel hit its iteration cap."""


class SVDResult(NamedTuple):
    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise ShapeError(f"expected a 2-D matrix, got shape {m.shape}")
    return m


def _square(a, name: str = "a") -> np.ndarray:
    m = as_matrix(a)
    n, k = m.shape
    if n != k:
        raise ShapeError(f"{name} must be square, got {m.shape}")
    if n > MAX_DIM:
        raise ShapeError(f"{name} has dimension {n} > {MAX_DIM}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} contains NaN or infinite entries")
    return m


def mat_mul(a, b) -> np.ndarray:
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def dagger(a) -> np.ndarray:
    """Conjugate transpose."""
    return as_matrix(a).conj().T


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=complex)


def blocks(a11, a12, a21, a22) -> np.ndarray:
    """Assemble a 2x2 block matrix."""
    return np.block([[a11, a12], [a21, a22]]).astype(complex)


# ---------------------------------------------------------------------------
# eigenvalues


def balance(a) -> np.ndarray:
    """Diagonal similarity scaling by powers of two (Parlett-Reinsch)."""
    h = np.array(_square(a), dtype=complex)
    n = h.shape[0]
    radix = 2.0
    converged = False
    while not converged:
        converged = True
        for i in range(n):
            c = np.sum(np.abs(h[:, i])) - abs(h[i, i])
            r = np.sum(np.abs(h[i, :])) - abs(h[i, i])
            if c == 0.0 or r == 0.0:
                continue
            g = r / radix
            f = 1.0
            s = c + r
            while c < g:
                f *= radix
                c *= radix * radix
            g = r * radix
            while c > g:
                f /= radix
                c /= radix * radix
            if (c + r) / f < 0.95 * s:
                converged = False
                h[i, :] /= f
                h[:, i] *= f
    return h


def hessenberg(a) -> np.ndarray:
    """Upper Hessenberg form by Householder reflections (similarity)."""
    h = np.array(_square(a), dtype=complex)
    n = h.shape[0]
    for k in range(n - 2):
        x = h[k + 1:, k].copy()
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        phase = np.exp(1j * np.angle(x[0]))
        v = x
        v[0] += phase * alpha
        v /= np.linalg.norm(v)
        h[k + 1:, k:] -= 2.0 * np.outer(v, v.conj() @ h[k + 1:, k:])
        h[:, k + 1:] -= 2.0 * np.outer(h[:, k + 1:] @ v, v.conj())
        h[k + 2:, k] = 0.0
    return h


def _eig2(a, b, c, d) -> tuple[complex, complex]:
    """Eigenvalues of [[a, b], [c, d]], cancellation-safe."""
    tr = a + d
    half = 0.5 * (a - d)
    disc = np.sqrt(half * half + b * c)
    m = 0.5 * tr
    # pick the root of larger magnitude first, recover the other from det
    r1 = m + disc if abs(m + disc) >= abs(m - disc) else m - disc
    det = a * d - b * c
    r2 = det / r1 if r1 != 0 else m - (r1 - m)
    return complex(r1), complex(r2)


def _wilkinson(h: np.ndarray, hi: int) -> complex:
    a, b = h[hi - 1, hi - 1], h[hi - 1, hi]
    c, d = h[hi, hi - 1], h[hi, hi]
    r1, r2 = _eig2(a, b, c, d)
    return r1 if abs(r1 - d) <= abs(r2 - d) else r2


def _givens(x: complex, y: complex) -> tuple[float, complex, float]:
    """Return (c, s, r) with [[c, s], [-conj(s), c]] @ [x, y] = [r', 0]."""
    ax = abs(x)
    if y == 0:
        return 1.0, 0j, ax
    if ax == 0:
        return 0.0, np.conj(y) / abs(y), abs(y)
    r = np.hypot(ax, abs(y))
    c = ax / r
    s = (x / ax) * np.conj(y) / r
    return c, s, r


def _qr_step(h: np.ndarray, lo: int, hi: int, mu: complex) -> None:
    """One explicitly shifted QR sweep on the active window h[lo:hi+1, lo:hi+1]."""
    n = h.shape[0]
    rots = []
    for k in range(lo, hi + 1):
        h[k, k] -= mu
    for k in range(lo, hi):
        c, s, _ = _givens(h[k, k], h[k + 1, k])
        g = np.array([[c, s], [-np.conj(s), c]])
        h[k:k + 2, k:n] = g @ h[k:k + 2, k:n]
        rots.append((k, g))
    for k, g in rots:
        h[0:min(k + 3, n), k:k + 2] = h[0:min(k + 3, n), k:k + 2] @ g.conj().T
    for k in range(lo, hi + 1):
        h[k, k] += mu


def eig(a, *, max_iter: int | None = None) -> np.ndarray:
    """All eigenvalues of a square complex matrix, with multiplicity.

    Balancing, Hessenberg reduction, then Wilkinson-shifted QR sweeps with
    deflation.  The result is sorted by decreasing modulus and then by
    increasing argument.

    Raises
    ------
    ConvergenceError
        If deflation needs more than ``100 * dim`` sweeps in total.
    """
    m = _square(a)
    n = m.shape[0]
    if n == 0:
        return np.zeros(0, dtype=complex)
    # work at unit scale; entries this far below the largest are within the
    # backward error of QR anyway, and dropping them avoids subnormal arithmetic
    s = float(np.abs(m).max())
    if s == 0.0:
        return np.zeros(n, dtype=complex)
    m = m / s
    m[np.abs(m) < _EPS * 1e-3] = 0.0
    h = hessenberg(balance(m))
    cap = max_iter if max_iter is not None else EIG_ITER_FACTOR * n
    out = np.zeros(n, dtype=complex)
    hi = n - 1
    total = 0
    since_deflation = 0
    while hi >= 0:
        if hi == 0:
            out[0] = h[0, 0]
            break
        # find the start of the trailing unreduced block
        lo = hi
        while lo > 0:
            scale = abs(h[lo, lo]) + abs(h[lo - 1, lo - 1])
            if scale == 0.0:
                scale = np.abs(h).max()
            if abs(h[lo, lo - 1]) <= _EPS * scale:
                h[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            out[hi] = h[hi, hi]
            hi -= 1
            since_deflation = 0
            continue
        if lo == hi - 1:
            out[hi - 1], out[hi] = _eig2(h[hi - 1, hi - 1], h[hi - 1, hi],
                                         h[hi, hi - 1], h[hi, hi])
            hi -= 2
            since_deflation = 0
            continue
        if total >= cap:
            raise ConvergenceError(f"QR iteration did not converge in {cap} sweeps")
        if since_deflation and since_deflation % 10 == 0:
            # exceptional shift breaks symmetric stalls
            mu = h[hi, hi] + 0.75 * abs(h[hi, hi - 1])
        else:
            mu = _wilkinson(h, hi)
        _qr_step(h, lo, hi, mu)
        total += 1
        since_deflation += 1
    return sort_spectrum(out * s)


def sort_spectrum(values) -> np.ndarray:
    v = np.asarray(values, dtype=complex)
    # magnitudes equal to ~12 relative digits count as ties, broken by argument
    top = float(np.abs(v).max()) if v.size else 0.0
    mags = np.round(np.abs(v) / top, 12) if top > 0 else np.abs(v)
    args = np.round(np.angle(v), 12)
    order = np.lexsort((args, -mags))
    return v[order]


def charpoly_residual(a, lam: complex) -> float:
    """|det(A - lam I)| evaluated through an LU factorisation."""
    m = _square(a)
    return float(abs(np.linalg.det(m - lam * np.eye(m.shape[0]))))


# ---------------------------------------------------------------------------
# singular values


def _complete_basis(u: np.ndarray, keep: np.ndarray) -> np.ndarray:
    """Replace the columns not in ``keep`` by an orthonormal completion."""
    n = u.shape[0]
    basis = [u[:, k] for k in range(u.shape[1]) if keep[k]]
    fill = []
    for e in np.eye(n, dtype=complex):
        if len(basis) + len(fill) == n:
            break
        w = e.copy()
        for _ in range(2):
            for b in basis + fill:
                w -= (b.conj() @ w) * b
        nw = np.linalg.norm(w)
        if nw > 1e-8:
            fill.append(w / nw)
    out = u.copy()
    it = iter(fill)
    for k in range(u.shape[1]):
        if not keep[k]:
            out[:, k] = next(it)
    return out


def svd(a, *, tol: float = SVD_TOL, max_sweeps: int = 80) -> SVDResult:
    """Singular value decomposition ``A = U diag(sigma) V^H``.

    Cyclic one-sided (Hestenes) Jacobi on the columns of ``A``.  Columns
    belonging to zero singular values are completed to a unitary ``U``.
    """
    w = np.array(_square(a), dtype=complex)
    n = w.shape[1]
    v = np.eye(n, dtype=complex)
    # columns this small are numerically zero; rotating them only amplifies rounding
    negligible = (n * _EPS * np.linalg.norm(w)) ** 2
    for _ in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                wp = w[:, p]
                wq = w[:, q]
                alpha = np.vdot(wp, wp).real
                beta = np.vdot(wq, wq).real
                gamma = np.vdot(wp, wq)
                g = abs(gamma)
                if g == 0.0 or min(alpha, beta) <= negligible or g <= tol * np.sqrt(alpha * beta):
                    continue
                rotated = True
                phase = gamma / g
                zeta = (beta - alpha) / (2.0 * g)
                t = (1.0 if zeta >= 0 else -1.0) / (abs(zeta) + np.hypot(1.0, zeta))
                c = 1.0 / np.hypot(1.0, t)
                s = c * t
                # columns [wp, wq] <- [wp, wq] @ diag(1, conj(phase)) @ [[c, s], [-s, c]]
                wq_ph = wq * np.conj(phase)
                w[:, p], w[:, q] = c * wp - s * wq_ph, s * wp + c * wq_ph
                vp = v[:, p]
                vq_ph = v[:, q] * np.conj(phase)
                v[:, p], v[:, q] = c * vp - s * vq_ph, s * vp + c * vq_ph
        if not rotated:
            break
    else:
        raise ConvergenceError(f"Jacobi SVD did not converge in {max_sweeps} sweeps")
    sigma = np.linalg.norm(w, axis=0)
    order = np.argsort(-sigma, kind="stable")
    sigma = sigma[order]
    w = w[:, order]
    v = v[:, order]
    floor = sigma[0] * n * _EPS if sigma.size and sigma[0] > 0 else 0.0
    keep = sigma > max(floor, np.finfo(float).tiny)
    u = np.zeros_like(w)
    u[:, keep] = w[:, keep] / sigma[keep]
    if not np.all(keep):
        u = _complete_basis(u, keep)
    return SVDResult(u, sigma, v)


def singular_values(a) -> np.ndarray:
    return svd(a).sigma
