"""Statistics over loop sweeps: eigenvalue magnitudes, large/small grouping and actions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .loops.engine import StepRecord


@dataclass(frozen=True)
class Grouping:
    large: np.ndarray
    small: np.ndarray
    degenerate: bool


def group_eigs(values, tol: float = 1e-12) -> Grouping:
    """Split magnitudes into the larger and the smaller half.

    Values are ordered by decreasing modulus, then increasing argument, then
    input position.  The split is flagged ``degenerate`` when the smallest
    large magnitude equals the largest small one within ``tol`` (relative).
    """
    v = np.asarray(values)
    n = v.size
    if n % 2:
        raise ValueError(f"need an even number of values, got {n}")
    mags = np.abs(v)
    args = np.angle(v) if np.iscomplexobj(v) else np.where(v < 0, np.pi, 0.0)
    order = np.lexsort((np.arange(n), args, -mags))
    m = mags[order]
    h = n // 2
    scale = max(float(m[0]), 1.0) if n else 1.0
    degenerate = bool(n) and abs(float(m[h - 1]) - float(m[h])) <= tol * scale
    return Grouping(m[:h].copy(), m[h:].copy(), degenerate)


@dataclass(frozen=True)
class SpectrumSeries:
    """Records of one ``(loop, step, time_axis)`` grouped by j.

    ``eigs[k]`` is a ``(nsets, 4)`` array of eigenvalues of ``X Xbar`` at
    ``j_values[k]`` and ``sigma[k]`` the matching ``(nsets, 8)`` singular
    values of the step response.
    """

    loop: str
    step: int
    time_axis: str
    j_values: np.ndarray
    eigs: tuple[np.ndarray, ...]
    sigma: tuple[np.ndarray, ...]

    @property
    def key(self) -> tuple[str, int, str]:
        return self.loop, self.step, self.time_axis


def series_from_records(records: Iterable[StepRecord]) -> dict[tuple[str, int, str], SpectrumSeries]:
    groups: dict[tuple[str, int, str], dict[float, list[StepRecord]]] = {}
    for r in records:
        groups.setdefault((r.loop, r.step, r.time_axis), {}).setdefault(r.j, []).append(r)
    out = {}
    for key, by_j in sorted(groups.items()):
        js = sorted(by_j)
        rows = [sorted(by_j[j], key=lambda r: r.set_index) for j in js]
        out[key] = SpectrumSeries(
            *key,
            j_values=np.array(js),
            eigs=tuple(np.array([r.xxbar_eigs for r in rs]) for rs in rows),
            sigma=tuple(np.array([r.response_sigma for r in rs]) for rs in rows),
        )
    return out


def abs_eig_mean(series: SpectrumSeries) -> np.ndarray:
    """Per j, per set mean of ``|eig(X Xbar)|``; shape ``(nj, nsets)``."""
    return np.array([np.abs(e).mean(axis=1) for e in series.eigs])


@dataclass(frozen=True)
class SeparatedSeries:
    j_values: np.ndarray
    large_mean: np.ndarray
    large_var: np.ndarray
    small_mean: np.ndarray
    small_var: np.ndarray
    mixed_mean: np.ndarray
    mixed_var: np.ndarray


def _pooled(values: Sequence[np.ndarray]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    large, small, mixed = [], [], []
    for per_set in values:
        g = group_eigs(per_set)
        large.append(g.large)
        small.append(g.small)
        mixed.append(np.abs(per_set))
    return np.concatenate(large), np.concatenate(small), np.concatenate(mixed)


def svd_separate(series: SpectrumSeries) -> SeparatedSeries:
    """Group the response singular values of every set and pool the groups over sets.

    Variances are population variances of the pooled values at each j.
    """
    if len(series.j_values) == 0:
        raise ValueError("series has no points")
    cols: dict[str, list[float]] = {k: [] for k in ("lm", "lv", "sm", "sv", "mm", "mv")}
    for sig in series.sigma:
        lg, sm, mx = _pooled(list(sig))
        cols["lm"].append(lg.mean())
        cols["lv"].append(lg.var())
        cols["sm"].append(sm.mean())
        cols["sv"].append(sm.var())
        cols["mm"].append(mx.mean())
        cols["mv"].append(mx.var())
    a = {k: np.array(v) for k, v in cols.items()}
    return SeparatedSeries(series.j_values.copy(), a["lm"], a["lv"], a["sm"], a["sv"], a["mm"], a["mv"])


def action_values(series: SpectrumSeries) -> np.ndarray:
    """Per j, per set nuclear norm of the step response; shape ``(nj, nsets)``."""
    return np.array([s.sum(axis=1) for s in series.sigma])


def action_series(series: SpectrumSeries) -> np.ndarray:
    """Per j mean over sets of the nuclear norm of the step response.

    Pass the series of the loop's final step to get the loop action.
    """
    return action_values(series).mean(axis=1)


def step_profile(records: Iterable[StepRecord], j: float) -> dict[int, float]:
    """Mean ``|eig(X Xbar)|`` over sets at one j, for each step."""
    acc: dict[int, list[float]] = {}
    for r in records:
        if r.j == j:
            acc.setdefault(r.step, []).append(float(np.abs(r.xxbar_eigs).mean()))
    return {k: float(np.mean(v)) for k, v in sorted(acc.items())}
