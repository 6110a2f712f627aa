"""Execute loop programs: seeded draws, per-step matrices and j sweeps."""

from __future__ import annotations

import struct
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from ..clifford import CATALOG
from ..conformal import ConformalPoint, from_coefficients, time_label
from ..numeric import blocks
from .program import COEFFS, LoopProgram, StepRecipe, loop_table, move_slot, symmetrized_schedule, \
    verbatim_schedule

DEFAULT_DU = 0.25
DEFAULT_DT = 0.25
DEFAULT_J0 = 0.0
DEFAULT_SEED = 42
DEFAULT_NSETS = 4
SCHEDULES = ("symmetrized", "verbatim")

@dataclass(frozen=True)
class RandomDraws:
    s: tuple[float, float, float, float]
    coeffs: Mapping[str, float]
    seed: int
    set_index: int

    def __getitem__(self, name: str) -> float:
        if name.startswith("s"):
            return self.s[int(name[1:]) - 1]
        return self.coeffs[name]


def _j_key(j: float) -> tuple[int, int]:
    bits = struct.unpack("<Q", struct.pack("<d", float(j)))[0]
    return bits >> 32, bits & 0xFFFFFFFF


def make_draws(seed: int, j: float, set_index: int, du: float = DEFAULT_DU) -> RandomDraws:
    """Draws for one ``(seed, j, set)`` cell.

    The stream is a PCG64 generator seeded through ``SeedSequence`` with
    ``seed`` as entropy and ``(bits of j, set_index)`` as spawn key.  The loop
    name is deliberately not part of the key, so different loops evaluated
    at the same cell see the same numbers.
    """
    ss = np.random.SeedSequence(int(seed), spawn_key=(*_j_key(j), int(set_index)))
    rng = np.random.Generator(np.random.PCG64(ss))
    s = rng.uniform(0.0, du, 4)
    c = rng.uniform(0.0, 1.0, len(COEFFS))
    return RandomDraws(tuple(float(v) for v in s), dict(zip(COEFFS, (float(v) for v in c))),
                       int(seed), int(set_index))


@dataclass(frozen=True)
class StepState:
    step_index: int
    x_tilde: Mapping[str, float]
    xbar_tilde: Mapping[str, float]
    phi: ConformalPoint
    delta_matrix: np.ndarray
    response: np.ndarray


def initial_state() -> StepState:
    z8 = np.zeros((8, 8), dtype=complex)
    return StepState(0, {}, {}, from_coefficients({}), z8, z8)


def evaluate(counts: Counter, j: float, j0: float, draws: RandomDraws) -> float:
    """Value of an integer combination of ``j, j0, s1..s4``; exact zero when it cancels."""
    total = 0.0
    for sym in ("j", "j0", "s1", "s2", "s3", "s4"):
        n = counts.get(sym, 0)
        if n:
            v = j if sym == "j" else j0 if sym == "j0" else draws[sym]
            total += n * v
    return total


def _label(slot: str, axis: str) -> str:
    if slot == "T":
        return time_label(axis)
    return slot.rstrip("!")


def _realize(cmap: Mapping[str, Counter], axis: str, j, j0, draws) -> dict[str, float]:
    out: dict[str, float] = {}
    for slot, counts in cmap.items():
        lab = _label(slot, axis)
        out[lab] = out.get(lab, 0.0) + evaluate(counts, j, j0, draws)
    return out


def _block(terms, axis: str, draws: RandomDraws) -> np.ndarray:
    out = np.zeros((4, 4), dtype=complex)
    for t in terms:
        lab = "I" if t.basis == "I" else _label(t.basis, axis)
        out += t.sign * draws[t.coef] * CATALOG.basis(lab, t.barred)
    return out


def step_matrices(recipe: StepRecipe, axis: str, draws: RandomDraws) -> tuple[np.ndarray, np.ndarray]:
    """``(V, Vd)`` 8x8 matrices of one step."""
    v = [_block(b, axis, draws) for b in recipe.V]
    vd = [_block(b, axis, draws) for b in recipe.Vd]
    return blocks(*v), blocks(*vd)


def check_axis(prog: LoopProgram, axis: str | None) -> str:
    axis = prog.default_axis if axis is None else axis
    time_label(axis)
    if axis not in prog.axes:
        raise ValueError(f"{prog.name} is defined for time axes {', '.join(prog.axes)}, not {axis}")
    return axis


class _Compiled:
    """Symbolic per-step coefficient maps of one program, computed once."""

    def __init__(self, prog: LoopProgram, schedule: str):
        if schedule not in SCHEDULES:
            raise ValueError(f"schedule must be one of {SCHEDULES}, not {schedule!r}")
        if schedule == "symmetrized":
            self.maps = [(m, m) for m in symmetrized_schedule(prog)]
        else:
            self.maps = verbatim_schedule(prog)


_COMPILED: dict[tuple[str, str], _Compiled] = {}


def _compiled(prog: LoopProgram, schedule: str) -> _Compiled:
    key = (prog.name, schedule)
    if key not in _COMPILED:
        _COMPILED[key] = _Compiled(prog, schedule)
    return _COMPILED[key]


def run_step(prog: LoopProgram, state: StepState, draws: RandomDraws, j: float, j0: float,
             axis: str | None = None, schedule: str = "symmetrized") -> StepState:
    """Advance one step: update coefficients, rebuild Phi, apply ``V Phi Vd - Phi``.

    ``delta_matrix`` is the raw ``V Phi Vd - Phi``.  Since the lower-left
    block of Phi is always I4 this never vanishes, so ``response`` also
    records ``V D Vd - D`` with ``D = Phi - Phi(0)``, the part carried by
    the coordinates; it is exactly zero when the coefficients cancel.
    """
    if state.step_index >= prog.nsteps:
        raise ValueError(f"{prog.name} has only {prog.nsteps} steps")
    axis = check_axis(prog, axis)
    k = state.step_index + 1
    xmap, xbarmap = _compiled(prog, schedule).maps[k - 1]
    xt = _realize(xmap, axis, j, j0, draws)
    xbt = xt if xbarmap is xmap else _realize(xbarmap, axis, j, j0, draws)
    phi = from_coefficients(xt, xbt)
    V, Vd = step_matrices(prog.step(k), axis, draws)
    delta = V @ phi.Phi @ Vd - phi.Phi
    d = phi.Phi.copy()
    d[4:, :4] = 0.0
    response = V @ d @ Vd - d
    return StepState(k, xt, xbt, phi, delta, response)


def run_loop(prog: LoopProgram, j: float, j0: float = DEFAULT_J0, seed: int = DEFAULT_SEED,
             nsets: int = DEFAULT_NSETS, axis: str | None = None, schedule: str = "symmetrized",
             du: float = DEFAULT_DU) -> list[list[StepState]]:
    """All steps for each draw set: ``out[set][step - 1]``."""
    if nsets < 1:
        raise ValueError("nsets must be at least 1")
    axis = check_axis(prog, axis)
    out = []
    for s in range(nsets):
        draws = make_draws(seed, j, s, du)
        state = initial_state()
        states = []
        for _ in range(prog.nsteps):
            state = run_step(prog, state, draws, j, j0, axis, schedule)
            states.append(state)
        out.append(states)
    return out


def path_coords(name: str | LoopProgram, i: float, j: float, k: float, du: float = DEFAULT_DU,
                dt: float = DEFAULT_DT) -> list[tuple[float, float, float, float]]:
    """Lattice positions ``(x, y, z, t)`` visited by the loop, start repeated at the end."""
    prog = loop_table(name) if isinstance(name, str) else name
    pos = {"23": i, "13": j, "12": k, "T": 0.0}
    step = {"23": du, "13": du, "12": du, "T": dt}
    out = [(pos["23"], pos["13"], pos["12"], pos["T"])]
    # remember the exact value before each forward move so reverse moves land back exactly
    history: dict[str, list[float]] = {}
    for m in prog.moves:
        slot = move_slot(m)
        if m.startswith("-"):
            pos[slot] = history[slot].pop()
        else:
            history.setdefault(slot, []).append(pos[slot])
            pos[slot] = pos[slot] + step[slot]
        out.append((pos["23"], pos["13"], pos["12"], pos["T"]))
    return out


# ---------------------------------------------------------------------------
# sweeps


@dataclass(frozen=True)
class StepRecord:
    loop: str
    step: int
    time_axis: str
    j: float
    set_index: int
    x_tilde: Mapping[str, float]
    xxbar_eigs: np.ndarray
    response_sigma: np.ndarray


def _records_for_j(args) -> list[StepRecord]:
    from ..numeric import eig, singular_values

    name, j, j0, seed, nsets, axis, schedule, du = args
    prog = loop_table(name)
    out = []
    for s, states in enumerate(run_loop(prog, j, j0, seed, nsets, axis, schedule, du)):
        for st in states:
            out.append(StepRecord(name, st.step_index, axis, float(j), s, dict(st.x_tilde),
                                  eig(st.phi.XXbar), singular_values(st.response)))
    return out


def sweep(prog: LoopProgram | str, j_values: Iterable[float], j0: float = DEFAULT_J0,
          seed: int = DEFAULT_SEED, nsets: int = DEFAULT_NSETS, axis: str | None = None,
          schedule: str = "symmetrized", du: float = DEFAULT_DU, workers: int = 1) -> list[StepRecord]:
    """Records for every ``(j, set, step)``, ordered by ``(step, j, set)``.

    Each j point is independent; with ``workers > 1`` they are computed in
    a process pool and merged by key, so the result does not depend on the
    worker count or on the order of ``j_values``.
    """
    prog = loop_table(prog) if isinstance(prog, str) else prog
    js = sorted({float(v) for v in j_values})
    if not js:
        raise ValueError("j grid is empty")
    axis = check_axis(prog, axis)
    jobs = [(prog.name, jv, j0, seed, nsets, axis, schedule, du) for jv in js]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            chunks = list(ex.map(_records_for_j, jobs))
    else:
        chunks = [_records_for_j(a) for a in jobs]
    recs = [r for chunk in chunks for r in chunk]
    recs.sort(key=lambda r: (r.step, r.j, r.set_index))
    return recs


def j_grid(j_min: float = 0.0, j_max: float = 3.75, j_step: float = 0.25) -> list[float]:
    """Inclusive grid ``j_min, j_min + j_step, ...`` up to ``j_max``."""
    if j_step <= 0 or j_max < j_min:
        raise ValueError("need j_step > 0 and j_min <= j_max")
    n = int(np.floor((j_max - j_min) / j_step + 1e-9)) + 1
    return [j_min + k * j_step for k in range(n)]

