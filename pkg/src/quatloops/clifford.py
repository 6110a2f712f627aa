"""Explicit 4x4 matrix catalog for Cl(3,1) and the (2+1)D coordinate matrix.

Every matrix below is transcribed entry for entry from the published
listings.  Note that the listed bivector matrices are *not* products of the
listed basis vectors (only ``e1 e4`` coincides); the catalog keeps both sets
as printed and the identities that do and do not hold between them are
exercised by :func:`identity_report` and the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .quaternion import Quaternion

_i = 1j

BIVECTOR_LABELS = ("23", "13", "12", "14", "24", "34")
TIME_AXES = {"e1e4": "14", "e2e4": "24", "e3e4": "34"}

ETA = np.diag([1.0, 1.0, 1.0, -1.0])


def _frozen(a) -> np.ndarray:
    m = np.array(a, dtype=complex)
    m.setflags(write=False)
    return m


_E = (
    _frozen([[1, 0, 0, 0], [0, -1, 0, 0], [0, 0, -1, 0], [0, 0, 0, 1]]),
    _frozen([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]),
    _frozen([[0, 0, 1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, -1, 0, 0]]),
    _frozen([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]]),
)

_REF = _frozen([[0, 0, 1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, -1, 0, 0]])

_BIV = {
    "23": _frozen([[0, -_i, 0, 0], [-_i, 0, 0, 0], [0, 0, 0, _i], [0, 0, _i, 0]]),
    "13": _frozen([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]]),
    "12": _frozen(np.diag([-_i, _i, -_i, _i])),
    "14": _frozen([[0, -1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]),
    "24": _frozen([[0, _i, 0, 0], [-_i, 0, 0, 0], [0, 0, 0, _i], [0, 0, -_i, 0]]),
    "34": _frozen(np.diag([-1, 1, 1, -1])),
}

_BIV_BAR = {
    "23": _frozen([[0, 0, 0, _i], [0, 0, -_i, 0], [0, -_i, 0, 0], [_i, 0, 0, 0]]),
    "13": _frozen([[0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0]]),
    "12": _frozen([[0, 0, -_i, 0], [0, 0, 0, -_i], [-_i, 0, 0, 0], [0, -_i, 0, 0]]),
    "14": _frozen([[0, 0, 0, 1], [0, 0, -1, 0], [0, -1, 0, 0], [1, 0, 0, 0]]),
    "24": _frozen([[0, 0, 0, _i], [0, 0, _i, 0], [0, _i, 0, 0], [_i, 0, 0, 0]]),
    "34": _frozen([[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]]),
}

#: the common value claimed for the product of each bivector with its bar
PRODUCT_COMMON = _frozen([[0, 0, -1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, 1, 0, 0]])
#: printed sign of each term in the product chain, in printed order
PRODUCT_CHAIN_SIGNS = (("12", 1), ("13", -1), ("14", 1), ("23", -1), ("24", 1), ("34", -1))

#: printed values of e_i bar(e_i): [[0, I2], [-I2, 0]] for i=1,2,3 and its negative for i=4
E_BAR_E_CLAIMED = _frozen(np.block([[np.zeros((2, 2)), np.eye(2)], [-np.eye(2), np.zeros((2, 2))]]))

_Q = _frozen([[0, 1], [1, 0]])
_J = _frozen([[0, -1], [1, 0]])
_U = _frozen([[1, 0], [0, -1]])

_GAMMA_BIV = {
    "13": _frozen([[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]]),
    "24": _frozen([[0, 0, _i, 0], [0, 0, 0, -_i], [-_i, 0, 0, 0], [0, _i, 0, 0]]),
    "14": _frozen([[0, 0, -1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, 1, 0, 0]]),
    "23": _frozen([[0, 0, -_i, 0], [0, 0, 0, -_i], [-_i, 0, 0, 0], [0, -_i, 0, 0]]),
    "34": _frozen(np.diag([-1, 1, 1, -1])),
    "12": _frozen(np.diag([-_i, -_i, _i, _i])),
}

#: Kronecker recipes the printed gamma(e_i e_j) matrices are stated to equal
_GAMMA_RECIPES = {
    "13": -np.kron(_J, np.eye(2)),
    "24": -_i * np.kron(_J, _U),
    "14": -np.kron(_Q, _U),
    "23": -_i * np.kron(_Q, np.eye(2)),
    "34": -np.kron(_U, _U),
    "12": -_i * np.kron(_U, np.eye(2)),
}


@dataclass(frozen=True)
class BasisCatalog:
    e: tuple[np.ndarray, ...]
    biv: Mapping[str, np.ndarray]
    ref: np.ndarray
    biv_bar: Mapping[str, np.ndarray]
    qju: tuple[np.ndarray, np.ndarray, np.ndarray]
    gamma_biv: Mapping[str, np.ndarray] = field(default_factory=dict)

    def basis(self, label: str, barred: bool = False) -> np.ndarray:
        """Matrix for ``"I"`` or a bivector label, optionally barred."""
        if label == "I":
            return self.ref if barred else np.eye(4, dtype=complex)
        label = normalize_label(label)
        return self.biv_bar[label] if barred else self.biv[label]


def normalize_label(label: str) -> str:
    """``"31"`` and ``"13"`` name the same basis slot; likewise for others."""
    s = str(label).lstrip("+-")
    if len(s) != 2 or not s.isdigit():
        raise KeyError(f"not a bivector label: {label!r}")
    a, b = sorted(s)
    out = a + b
    if out not in _BIV:
        raise KeyError(f"not a bivector label: {label!r}")
    return out


def catalog() -> BasisCatalog:
    return BasisCatalog(
        e=_E,
        biv=MappingProxyType(dict(_BIV)),
        ref=_REF,
        biv_bar=MappingProxyType(dict(_BIV_BAR)),
        qju=(_Q, _J, _U),
        gamma_biv=MappingProxyType(dict(_GAMMA_BIV)),
    )


CATALOG = catalog()


def bar(m, grade: str, cat: BasisCatalog = CATALOG) -> np.ndarray:
    """Reflection: ``-ref m`` on vectors, ``ref m`` on even elements."""
    m = np.asarray(m, dtype=complex)
    if m.shape != (4, 4):
        raise ValueError(f"bar acts on 4x4 matrices, got {m.shape}")
    if grade == "vector":
        return -cat.ref @ m
    if grade == "even":
        return cat.ref @ m
    raise ValueError(f"grade must be 'vector' or 'even', not {grade!r}")


def product_chain(cat: BasisCatalog = CATALOG, signs=PRODUCT_CHAIN_SIGNS) -> list[np.ndarray]:
    return [s * (cat.biv[lab] @ cat.biv_bar[lab]) for lab, s in signs]


def product_identity_check(cat: BasisCatalog = CATALOG, signs=PRODUCT_CHAIN_SIGNS) -> float:
    """Largest entrywise deviation of the signed chain from the printed common matrix."""
    return max(float(np.abs(t - PRODUCT_COMMON).max()) for t in product_chain(cat, signs))


def consistent_chain_signs(cat: BasisCatalog = CATALOG) -> tuple[tuple[str, int], ...]:
    """Signs that actually map each ``B bar(B)`` onto the printed common matrix."""
    out = []
    for lab, _ in PRODUCT_CHAIN_SIGNS:
        p = cat.biv[lab] @ cat.biv_bar[lab]
        if np.array_equal(p, PRODUCT_COMMON):
            out.append((lab, 1))
        elif np.array_equal(-p, PRODUCT_COMMON):
            out.append((lab, -1))
        else:
            out.append((lab, 0))
    return tuple(out)


def dirac_gammas(cat: BasisCatalog = CATALOG) -> tuple[np.ndarray, ...]:
    """gamma_0..gamma_3 from the Q, J, U blocks (gamma_0 = [[0, I2], [I2, 0]])."""
    q, j, u = cat.qju
    z = np.zeros((2, 2))
    i2 = np.eye(2)
    g0 = np.block([[z, i2], [i2, z]])
    g1 = np.block([[z, -q], [q, z]])
    g2 = np.block([[z, -_i * j], [_i * j, z]])
    g3 = np.block([[z, -u], [u, z]])
    return tuple(np.asarray(g, dtype=complex) for g in (g0, g1, g2, g3))


def gamma_recipes() -> dict[str, np.ndarray]:
    return {k: np.asarray(v, dtype=complex) for k, v in _GAMMA_RECIPES.items()}


def vaz_rep(u: Quaternion) -> np.ndarray:
    """Printed real 4x4 matrix of an even element ``u0 + u1 e23 + u2 e31 + u3 e12``.

    The bivector units obey ``e23 e31 = -e12``, so in terms of the Hamilton
    product this matrix is right multiplication:
    ``vaz_rep(u) @ vaz_rep(v) == vaz_rep(qmul(v, u))``.
    """
    u0, u1, u2, u3 = u
    return np.array([
        [u0, -u1, -u2, -u3],
        [u1, u0, u3, -u2],
        [u2, -u3, u0, u1],
        [u3, u2, -u1, u0],
    ])


def x21d(u1: float, u2: float) -> np.ndarray:
    """Printed (2+1)D conformal coordinate matrix ``[[x, x xbar], [I2, xbar]]``."""
    return np.array([
        [_i * u1, u2, _i * u1 ** 2 - u1 * u2, u1 * u2 + _i * u2 ** 2],
        [-u2, -_i * u1, -u1 * u2 - _i * u2 ** 2, -_i * u1 ** 2 + u1 * u2],
        [1, 0, u1 + _i * u2, 0],
        [0, 1, 0, u1 + _i * u2],
    ], dtype=complex)


def stereographic(u) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    n2 = float(u @ u)
    return np.append(2.0 * u, 1.0 - n2) / (1.0 + n2)


@dataclass(frozen=True)
class GarlingCoeffs:
    lambda0: float = 0.0
    lam: Mapping[str, float] = field(default_factory=dict)
    lambda_omega: float = 0.0

    def get(self, label: str) -> float:
        return float(self.lam.get(normalize_label(label), 0.0))

    @property
    def p(self) -> complex:
        return self.get("34") + _i * self.get("12")

    @property
    def r(self) -> complex:
        return self.get("13") + _i * self.get("24")

    @property
    def s(self) -> complex:
        return self.get("14") + _i * self.get("23")


def garling_embed(coeffs: GarlingCoeffs, cat: BasisCatalog = CATALOG) -> np.ndarray:
    """``gamma(x) - lambda0 I4 = sum lambda_ij gamma(e_i e_j)``."""
    out = np.zeros((4, 4), dtype=complex)
    for lab in BIVECTOR_LABELS:
        out += coeffs.get(lab) * cat.gamma_biv[lab]
    return out


def garling_pattern(coeffs: GarlingCoeffs) -> np.ndarray:
    """The block pattern in ``p, r, s`` that :func:`garling_embed` should reproduce."""
    p, r, s = coeffs.p, coeffs.r, coeffs.s
    pc, rc, sc = np.conj(p), np.conj(r), np.conj(s)
    return np.array([
        [-p, 0, r - s, 0],
        [0, pc, 0, rc + sc],
        [-r - s, 0, p, 0],
        [0, -rc + sc, 0, -pc],
    ], dtype=complex)


def identity_report(cat: BasisCatalog = CATALOG) -> list[tuple[str, bool, str]]:
    """Every catalog identity as ``(name, passed, detail)``."""
    rows: list[tuple[str, bool, str]] = []
    e = cat.e
    sig_dev = 0.0
    for a in range(4):
        for b in range(4):
            want = 2.0 * ETA[a, b] * np.eye(4)
            sig_dev = max(sig_dev, float(np.abs(e[a] @ e[b] + e[b] @ e[a] - want).max()))
    rows.append(("basis anticommutation e_a e_b + e_b e_a = 2 eta_ab I4", sig_dev == 0.0,
                 f"max dev {sig_dev:g}"))

    products = [lab for lab in BIVECTOR_LABELS
                if np.array_equal(cat.biv[lab], e[int(lab[0]) - 1] @ e[int(lab[1]) - 1])]
    rows.append(("listed bivectors equal e_i e_j", len(products) == len(BIVECTOR_LABELS),
                 "equal for " + (" ".join(products) or "none")))

    ref_dev = float(np.abs(cat.ref - e[2]).max())
    rows.append(("reflection matrix equals e3 entrywise", ref_dev == 0.0, f"max dev {ref_dev:g}"))

    bar_dev = max(float(np.abs(bar(cat.biv[lab], "even", cat) - cat.biv_bar[lab]).max())
                  for lab in BIVECTOR_LABELS)
    rows.append(("barred bivectors equal ref . (e_i e_j)", bar_dev == 0.0, f"max dev {bar_dev:g}"))

    inv_dev = max(float(np.abs(bar(bar(cat.biv[lab], "even", cat), "even", cat) - cat.biv[lab]).max())
                  for lab in BIVECTOR_LABELS)
    rows.append(("bar is an involution on bivectors", inv_dev == 0.0, f"max dev {inv_dev:g}"))

    sq_ok = True
    for lab in BIVECTOR_LABELS:
        sq = cat.biv[lab] @ cat.biv[lab]
        sq_ok &= bool(np.array_equal(sq, np.eye(4)) or np.array_equal(sq, -np.eye(4)))
    rows.append(("bivector squares are +-I4", sq_ok, ""))

    chain_dev = product_identity_check(cat)
    rows.append(("product chain e_ie_j . bar(e_ie_j) with printed signs equals common matrix",
                 chain_dev == 0.0, f"max dev {chain_dev:g}"))
    consistent = consistent_chain_signs(cat)
    rows.append(("each e_ie_j . bar(e_ie_j) equals +-common matrix",
                 all(s != 0 for _, s in consistent),
                 "signs " + " ".join(f"{lab}:{s:+d}" for lab, s in consistent)))

    ebar = [bar(v, "vector", cat) for v in e]
    e4_dev = float(np.abs(e[3] @ ebar[3] + E_BAR_E_CLAIMED).max())
    rows.append(("e4 . bar(e4) equals [[0, -I2], [I2, 0]]", e4_dev == 0.0, f"max dev {e4_dev:g}"))
    total = sum(a @ b + b @ a for a, b in zip(e, ebar))
    sum_dev = float(np.abs(total).max())
    rows.append(("sum_i e_i bar(e_i) + bar(e_i) e_i = 0", sum_dev == 0.0, f"max dev {sum_dev:g}"))

    g = dirac_gammas(cat)
    sig = [1, -1, -1, -1]
    gdev = 0.0
    for a in range(4):
        for b in range(4):
            want = (2.0 * sig[a] if a == b else 0.0) * np.eye(4)
            gdev = max(gdev, float(np.abs(g[a] @ g[b] + g[b] @ g[a] - want).max()))
    rows.append(("Dirac gammas: {g_mu, g_nu} = 2 diag(+,-,-,-)", gdev == 0.0, f"max dev {gdev:g}"))

    rec = gamma_recipes()
    rdev = max(float(np.abs(cat.gamma_biv[lab] - rec[lab]).max()) for lab in BIVECTOR_LABELS)
    rows.append(("gamma(e_ie_j) listings equal their Kronecker recipes", rdev == 0.0, f"max dev {rdev:g}"))
    return rows
