"""Loop programs: table rows, paths and per-step recipes, stored as text.

A program file is line oriented.  Header lines::

    name L19
    space 3+1
    directions +23 +31 +12 +24 -12 -24 -23 -31
    moves +y +x +t +z -t -z -y -x
    axes e2e4
    default e2e4

followed by one block per step::

    step 4
      jt4 = j0 + s4
      x = 23:jt1 13:jt2 12:jt3 T:jt4
      xbar = 23:jt1 13:jt2 12:jt3 T:jt4
      V = a1*I - a2*12 ; 0 ; 0 ; d2*12
      Vd = -d2*~12 ; 0 ; 0 ; a1*~I - a2*~12
      note free text

``T`` stands for the time bivector selected at run time, ``~`` marks a
barred basis element and ``34!`` pins a literal label that is not replaced
by the run axis.  Block lists are ``V11 ; V12 ; V21 ; V22``.  Everything
after ``#`` is a comment.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources

SYMBOLS = ("j", "j0", "s1", "s2", "s3", "s4")
COEFFS = ("a1", "a2", "b1", "b2", "c1", "c2", "d1", "d2")
LOOP_NAMES = ("L19", "L20", "L21", "L22", "L23", "L24", "L25", "L3p", "L4p", "L7p")

_SLOT_OF = {"23": "23", "32": "23", "13": "13", "31": "13", "12": "12", "21": "12"}
_MOVE_SLOT = {"x": "23", "y": "13", "z": "12", "t": "T"}
_TERM = re.compile(r"([+-])?\s*([abcd][12])\*(~?)(I|T|\d\d!?)$")
_JT_DEF = re.compile(r"jt(\d+)\s*=\s*(j0|j)\s*\+\s*s(\d)$")


class ProgramError(ValueError):
    """Malformed or inconsistent loop program."""


@dataclass(frozen=True)
class BlockTerm:
    sign: int
    coef: str
    basis: str  # "I", "T", a normalized label, or "34!"-style literal
    barred: bool

    def render(self) -> str:
        return f"{self.coef}*{'~' if self.barred else ''}{self.basis}"


Block = tuple[BlockTerm, ...]


@dataclass(frozen=True)
class StepRecipe:
    index: int
    jt: tuple[str, int]  # (base symbol, s index)
    x: tuple[tuple[str, tuple[tuple[int, int], ...]], ...]
    xbar: tuple[tuple[str, tuple[tuple[int, int], ...]], ...]
    V: tuple[Block, Block, Block, Block]
    Vd: tuple[Block, Block, Block, Block]
    notes: tuple[str, ...] = ()


@dataclass(frozen=True)
class LoopProgram:
    name: str
    space: str
    directions: tuple[str, ...]
    moves: tuple[str, ...]
    axes: tuple[str, ...]
    default_axis: str
    steps: tuple[StepRecipe, ...]
    notes: tuple[str, ...] = field(default=())

    @property
    def nsteps(self) -> int:
        return len(self.directions)

    def step(self, k: int) -> StepRecipe:
        return self.steps[k - 1]


def direction_slots(label: str) -> list[str]:
    """Slots a table entry may refer to; ``"14/24"`` lists alternatives."""
    out = []
    for part in label.lstrip("+-").split("/"):
        if part in _SLOT_OF:
            out.append(_SLOT_OF[part])
        elif len(part) == 2 and "4" in part:
            out.append("T")
        else:
            raise ProgramError(f"bad direction {label!r}")
    return out


def direction_slot(label: str) -> str:
    slots = set(direction_slots(label))
    if len(slots) != 1:
        raise ProgramError(f"direction {label!r} names several slots")
    return slots.pop()


def direction_sign(label: str) -> int:
    return -1 if label.startswith("-") else 1


def _signed_slot(label: str) -> tuple[int, str]:
    return direction_sign(label), direction_slot(label)


# ---------------------------------------------------------------------------
# parsing


def _parse_block(text: str) -> Block:
    text = text.strip()
    if text == "0":
        return ()
    # split into signed terms, keeping the sign with each term
    pieces = re.findall(r"[+-]?\s*[^+-]+", text)
    out = []
    for p in pieces:
        m = _TERM.match(p.strip())
        if not m:
            raise ProgramError(f"bad block term {p!r}")
        sign, coef, bar, basis = m.groups()
        if basis not in ("I", "T") and not basis.endswith("!"):
            basis = _SLOT_OF.get(basis, basis)
        out.append(BlockTerm(-1 if sign == "-" else 1, coef, basis, bar == "~"))
    return tuple(out)


def _parse_blocks(text: str) -> tuple[Block, Block, Block, Block]:
    parts = text.split(";")
    if len(parts) != 4:
        raise ProgramError(f"expected four blocks, got {text!r}")
    return tuple(_parse_block(p) for p in parts)  # type: ignore[return-value]


def _parse_jt_expr(expr: str) -> tuple[tuple[int, int], ...]:
    """``"jt3-jt5"`` -> ((+1, 3), (-1, 5))."""
    out = []
    for sign, k in re.findall(r"([+-]?)jt(\d+)", expr.replace(" ", "")):
        out.append((-1 if sign == "-" else 1, int(k)))
    if not out or re.sub(r"[+-]?jt\d+", "", expr.replace(" ", "")):
        raise ProgramError(f"bad coefficient expression {expr!r}")
    return tuple(out)


def _parse_coeffs(text: str):
    out = []
    for item in text.split():
        label, _, expr = item.partition(":")
        if not expr:
            raise ProgramError(f"bad coefficient item {item!r}")
        if label != "T" and not label.endswith("!"):
            label = _SLOT_OF.get(label)
            if label is None:
                raise ProgramError(f"bad slot in {item!r}")
        out.append((label, _parse_jt_expr(expr)))
    return tuple(out)


def parse_program(text: str) -> LoopProgram:
    head: dict[str, str] = {}
    notes: list[str] = []
    steps: list[dict] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key == "step":
            steps.append({"index": int(rest), "notes": []})
            continue
        if not steps:
            if key == "note":
                notes.append(rest)
            else:
                head[key] = rest
            continue
        cur = steps[-1]
        if key.startswith("jt"):
            m = _JT_DEF.match(line)
            if not m or int(m.group(1)) != cur["index"]:
                raise ProgramError(f"bad draw definition {line!r} in step {cur['index']}")
            cur["jt"] = (m.group(2), int(m.group(3)))
        elif key in ("x", "xbar", "V", "Vd"):
            cur[key] = rest.lstrip("=").strip()
        elif key == "note":
            cur["notes"].append(rest)
        else:
            raise ProgramError(f"unknown key {key!r}")
    try:
        recipes = tuple(
            StepRecipe(
                index=s["index"],
                jt=s["jt"],
                x=_parse_coeffs(s["x"]),
                xbar=_parse_coeffs(s["xbar"]),
                V=_parse_blocks(s["V"]),
                Vd=_parse_blocks(s["Vd"]),
                notes=tuple(s["notes"]),
            )
            for s in steps
        )
        prog = LoopProgram(
            name=head["name"],
            space=head["space"],
            directions=tuple(head["directions"].split()),
            moves=tuple(head["moves"].split()),
            axes=tuple(head["axes"].split()),
            default_axis=head["default"],
            steps=recipes,
            notes=tuple(notes),
        )
    except KeyError as exc:
        raise ProgramError(f"missing field {exc}") from None
    validate(prog)
    return prog


def validate(prog: LoopProgram) -> None:
    n = prog.nsteps
    if len(prog.moves) != n or len(prog.steps) != n:
        raise ProgramError(f"{prog.name}: {n} directions, {len(prog.moves)} moves, {len(prog.steps)} steps")
    if [s.index for s in prog.steps] != list(range(1, n + 1)):
        raise ProgramError(f"{prog.name}: steps must be numbered 1..{n}")
    if prog.default_axis not in prog.axes:
        raise ProgramError(f"{prog.name}: default axis not among allowed axes")
    for m in prog.moves:
        if m.lstrip("+-") not in _MOVE_SLOT:
            raise ProgramError(f"{prog.name}: bad move {m!r}")
    for d in prog.directions:
        direction_slots(d)


# ---------------------------------------------------------------------------
# serialization


def _render_expr(terms) -> str:
    s = "".join(("-" if sign < 0 else "+") + f"jt{k}" for sign, k in terms)
    return s[1:] if s.startswith("+") else s


def _render_coeffs(items) -> str:
    return " ".join(f"{label}:{_render_expr(terms)}" for label, terms in items)


def _render_block(block: Block) -> str:
    if not block:
        return "0"
    out = ""
    for t in block:
        if not out:
            out = ("-" if t.sign < 0 else "") + t.render()
        else:
            out += (" - " if t.sign < 0 else " + ") + t.render()
    return out


def serialize_program(prog: LoopProgram) -> str:
    lines = [
        f"name {prog.name}",
        f"space {prog.space}",
        "directions " + " ".join(prog.directions),
        "moves " + " ".join(prog.moves),
        "axes " + " ".join(prog.axes),
        f"default {prog.default_axis}",
    ]
    lines += [f"note {n}" for n in prog.notes]
    for s in prog.steps:
        lines.append("")
        lines.append(f"step {s.index}")
        lines.append(f"  jt{s.index} = {s.jt[0]} + s{s.jt[1]}")
        lines.append(f"  x = {_render_coeffs(s.x)}")
        lines.append(f"  xbar = {_render_coeffs(s.xbar)}")
        lines.append("  V = " + " ; ".join(_render_block(b) for b in s.V))
        lines.append("  Vd = " + " ; ".join(_render_block(b) for b in s.Vd))
        lines += [f"  note {n}" for n in s.notes]
    return "\n".join(lines) + "\n"


def load_program(name: str) -> LoopProgram:
    if name not in LOOP_NAMES:
        raise KeyError(f"unknown loop {name!r}; expected one of {', '.join(LOOP_NAMES)}")
    text = resources.files("quatloops.loops").joinpath("data", f"{name}.loop").read_text()
    prog = parse_program(text)
    if prog.name != name:
        raise ProgramError(f"file for {name} declares {prog.name}")
    return prog


_CACHE: dict[str, LoopProgram] = {}


def loop_table(name: str) -> LoopProgram:
    """The encoded program for a loop name (``L19``..``L25``, ``L3p``, ``L4p``, ``L7p``)."""
    if name not in _CACHE:
        _CACHE[name] = load_program(name)
    return _CACHE[name]


# ---------------------------------------------------------------------------
# symbolic coefficient schedules


def symmetrized_schedule(prog: LoopProgram) -> list[dict[str, Counter]]:
    """Coefficient map after each step, derived from the direction row.

    Forward steps take fresh draws ``s1, s2, ...`` in order; the first one is
    offset by ``j`` and the rest by ``j0``.  A reverse step reuses the draw of
    the most recent unmatched forward step on the same slot, so the pair
    cancels exactly.  Each map sends a slot to integer counts over
    :data:`SYMBOLS`.
    """
    coeffs: dict[str, Counter] = {}
    stacks: dict[str, list[int]] = {}
    nfwd = 0
    out = []
    for d in prog.directions:
        sign, slot = _signed_slot(d)
        c = coeffs.setdefault(slot, Counter())
        if sign > 0:
            nfwd += 1
            c["j" if nfwd == 1 else "j0"] += 1
            c[f"s{nfwd}"] += 1
            stacks.setdefault(slot, []).append(nfwd)
        else:
            if not stacks.get(slot):
                raise ProgramError(f"{prog.name}: reverse step {d} has no forward partner")
            k = stacks[slot].pop()
            c["j0"] -= 1
            c[f"s{k}"] -= 1
        out.append({s: Counter(v) for s, v in coeffs.items()})
    return out


def _jt_counts(prog: LoopProgram) -> dict[int, Counter]:
    return {s.index: Counter({s.jt[0]: 1, f"s{s.jt[1]}": 1}) for s in prog.steps}


def _expand(items, jts: dict[int, Counter]) -> dict[str, Counter]:
    out: dict[str, Counter] = {}
    for label, terms in items:
        c = out.setdefault(label, Counter())
        for sign, k in terms:
            if k not in jts:
                raise ProgramError(f"jt{k} is not defined")
            for sym, n in jts[k].items():
                c[sym] += sign * n
    return out


def verbatim_schedule(prog: LoopProgram) -> list[tuple[dict[str, Counter], dict[str, Counter]]]:
    """Per step ``(x, xbar)`` coefficient maps exactly as transcribed."""
    jts = _jt_counts(prog)
    return [(_expand(s.x, jts), _expand(s.xbar, jts)) for s in prog.steps]


def move_slot(move: str) -> str:
    return _MOVE_SLOT[move.lstrip("+-")]
