"""Command-line front end: ``quatloops verify | loop ... | qft ...``.

Exit codes: 0 success, 1 verification failure, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from . import qft
from .clifford import identity_report
from .loops import LOOP_NAMES, j_grid, loop_table, serialize_program, sweep
from .loops.engine import DEFAULT_DT, DEFAULT_DU, DEFAULT_J0, DEFAULT_NSETS, DEFAULT_SEED, check_axis
from .quaternion import AXES, hysteresis_curve, sinsurface
from .spectra import abs_eig_mean, action_values, group_eigs, series_from_records, svd_separate

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
CSV_HEADER = ("loop", "step", "time_axis", "j", "set", "kind", "value")
KINDS = ("abs_eig_mean", "action", "large", "mixed", "small")
SVG_W, SVG_H = 800, 600
SVG_COLORS = {"large": "red", "small": "green", "mixed": "blue"}


class UsageError(Exception):
    pass


def fmt(v: float) -> str:
    return format(float(v), ".17g")


# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class RunConfig:
    loop: str = "L19"
    time_axis: str | None = None
    j_min: float = 0.0
    j_max: float = 3.75
    j_step: float = 0.25
    j0: float = DEFAULT_J0
    seed: int = DEFAULT_SEED
    nsets: int = DEFAULT_NSETS
    du: float = DEFAULT_DU
    dt: float = DEFAULT_DT
    output_path: str | None = None
    emit_svg: bool = False
    verbatim: bool = False
    workers: int = 1
    plot_step: int = 3

    def validate(self) -> "RunConfig":
        if self.j_step <= 0:
            raise UsageError("j_step must be positive")
        if self.j_min > self.j_max:
            raise UsageError("j_min must not exceed j_max")
        if self.nsets < 1:
            raise UsageError("nsets must be at least 1")
        if self.du <= 0 or self.dt <= 0:
            raise UsageError("du and dt must be positive")
        if self.workers < 1:
            raise UsageError("workers must be at least 1")
        if not 0 <= self.seed < 2 ** 64:
            raise UsageError("seed must fit in 64 bits")
        for name in self.loops:
            if name not in LOOP_NAMES:
                raise UsageError(f"unknown loop {name!r}; choose from {', '.join(LOOP_NAMES)} or 'all'")
        return self

    @property
    def loops(self) -> tuple[str, ...]:
        if self.loop == "all":
            return LOOP_NAMES
        return tuple(s.strip() for s in self.loop.split(",") if s.strip())

    @property
    def schedule(self) -> str:
        return "verbatim" if self.verbatim else "symmetrized"


_BOOL = {"1": True, "true": True, "yes": True, "on": True, "0": False, "false": False, "no": False, "off": False}


def read_config(path: str) -> dict:
    """Flat ``key = value`` file mirroring :class:`RunConfig`; ``#`` starts a comment."""
    types = {f.name: f.type for f in fields(RunConfig)}
    out: dict = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key=value")
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in types:
            raise UsageError(f"{path}:{n}: unknown key {key!r}")
        t = str(types[key])
        try:
            if "bool" in t:
                out[key] = _BOOL[val.lower()]
            elif t.startswith("int"):
                out[key] = int(val)
            elif t.startswith("float"):
                out[key] = float(val)
            else:
                out[key] = val
        except (KeyError, ValueError) as exc:
            raise UsageError(f"{path}:{n}: bad value for {key}: {val!r}") from exc
    return out


# ---------------------------------------------------------------------------
# output helpers


def _open_out(path: str | None):
    if path is None or path == "-":
        return sys.stdout, False
    try:
        return open(path, "w", encoding="utf-8", newline=""), True
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc}") from exc


def write_csv(path: str | None, header: Sequence[str], rows) -> None:
    fh, close = _open_out(path)
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    finally:
        if close:
            fh.close()


def svg_plot(series: dict[str, tuple[Sequence[float], Sequence[float]]], title: str = "",
             colors: dict[str, str] | None = None) -> str:
    """Minimal SVG line plot: one polyline per series, fixed 800x600 viewport."""
    colors = colors or {}
    xs = [x for xv, _ in series.values() for x in xv]
    ys = [y for _, yv in series.values() for y in yv]
    if not xs:
        xs, ys = [0.0, 1.0], [0.0, 1.0]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    x1 = x1 if x1 > x0 else x0 + 1.0
    y1 = y1 if y1 > y0 else y0 + 1.0
    m = 50

    def px(x, y):
        return (m + (x - x0) / (x1 - x0) * (SVG_W - 2 * m), SVG_H - m - (y - y0) / (y1 - y0) * (SVG_H - 2 * m))

    out = io.StringIO()
    out.write(f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_W}" height="{SVG_H}" '
              f'viewBox="0 0 {SVG_W} {SVG_H}">\n')
    out.write(f'<rect x="0" y="0" width="{SVG_W}" height="{SVG_H}" fill="white"/>\n')
    out.write(f'<rect x="{m}" y="{m}" width="{SVG_W - 2 * m}" height="{SVG_H - 2 * m}" '
              f'fill="none" stroke="black"/>\n')
    if title:
        out.write(f'<text x="{m}" y="{m - 15}" font-size="14">{title}</text>\n')
    out.write(f'<text x="{m}" y="{SVG_H - 15}" font-size="12">x: {x0:.4g} .. {x1:.4g}   '
              f'y: {y0:.4g} .. {y1:.4g}</text>\n')
    for n, (name, (xv, yv)) in enumerate(series.items()):
        pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in (px(x, y) for x, y in zip(xv, yv)))
        col = colors.get(name, "black")
        out.write(f'<polyline fill="none" stroke="{col}" stroke-width="1.5" points="{pts}">'
                  f'<title>{name}</title></polyline>\n')
        out.write(f'<text x="{SVG_W - m - 80}" y="{m + 20 + 16 * n}" font-size="12" fill="{col}">{name}</text>\n')
    out.write("</svg>\n")
    return out.getvalue()


def _write_text(path: str, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc}") from exc


def _svg_path(out: str | None, svg, default: str) -> str | None:
    if svg is None or svg is False:
        return None
    if isinstance(svg, str):
        return svg
    if out and out != "-":
        return str(Path(out).with_suffix(".svg"))
    return default


# ---------------------------------------------------------------------------
# verify


def cmd_verify(report=None, stream=None) -> int:
    """Print the catalog identity table; exit 0 only if every identity holds."""
    stream = stream or sys.stdout
    rows = identity_report() if report is None else report
    width = max(len(name) for name, _, _ in rows)
    for name, ok, detail in rows:
        print(f"{'PASS' if ok else 'FAIL'}  {name:<{width}}  {detail}", file=stream)
    failed = sum(1 for _, ok, _ in rows if not ok)
    print(f"{len(rows) - failed}/{len(rows)} identities hold", file=stream)
    return EXIT_OK if failed == 0 else EXIT_FAIL


# ---------------------------------------------------------------------------
# loop


def loop_rows(cfg: RunConfig) -> list[tuple]:
    """CSV rows for every configured loop, sorted by ``(loop, step, j, set, kind)``."""
    js = j_grid(cfg.j_min, cfg.j_max, cfg.j_step)
    rows = []
    for name in cfg.loops:
        prog = loop_table(name)
        try:
            axis = check_axis(prog, cfg.time_axis)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        recs = sweep(prog, js, cfg.j0, cfg.seed, cfg.nsets, axis, cfg.schedule, cfg.du, cfg.workers)
        for (loop, step, ax), ser in series_from_records(recs).items():
            eig_means = abs_eig_mean(ser)
            actions = action_values(ser)
            for jn, j in enumerate(ser.j_values):
                for s in range(eig_means.shape[1]):
                    sig = ser.sigma[jn][s]
                    g = group_eigs(sig)
                    vals = {
                        "abs_eig_mean": eig_means[jn, s],
                        "action": actions[jn, s],
                        "large": g.large.mean(),
                        "mixed": np.abs(sig).mean(),
                        "small": g.small.mean(),
                    }
                    for kind in KINDS:
                        rows.append((loop, step, ax, float(j), s, kind, vals[kind]))
    rows.sort(key=lambda r: (r[0], r[1], r[3], r[4], r[5]))
    return [(lp, st, ax, fmt(j), s, k, fmt(v)) for lp, st, ax, j, s, k, v in rows]


def loop_svg(cfg: RunConfig) -> str:
    name = cfg.loops[0]
    prog = loop_table(name)
    axis = check_axis(prog, cfg.time_axis)
    if not 1 <= cfg.plot_step <= prog.nsteps:
        raise UsageError(f"plot step must be in 1..{prog.nsteps}")
    recs = sweep(prog, j_grid(cfg.j_min, cfg.j_max, cfg.j_step), cfg.j0, cfg.seed, cfg.nsets, axis,
                 cfg.schedule, cfg.du, cfg.workers)
    ser = series_from_records(recs)[(name, cfg.plot_step, axis)]
    sep = svd_separate(ser)
    x = list(4.0 * sep.j_values)
    data = {"large": (x, list(sep.large_mean)), "small": (x, list(sep.small_mean)),
            "mixed": (x, list(sep.mixed_mean))}
    return svg_plot(data, f"{name} step {cfg.plot_step} {axis}: singular values vs 4j", SVG_COLORS)


def cmd_loop(cfg: RunConfig, svg=None) -> int:
    cfg.validate()
    write_csv(cfg.output_path, CSV_HEADER, loop_rows(cfg))
    path = _svg_path(cfg.output_path, svg if svg is not None else cfg.emit_svg, f"{cfg.loops[0]}.svg")
    if path:
        _write_text(path, loop_svg(cfg))
    return EXIT_OK


def cmd_loop_show(names: Sequence[str]) -> int:
    for n, name in enumerate(names):
        if name not in LOOP_NAMES:
            raise UsageError(f"unknown loop {name!r}")
        if n:
            print()
        sys.stdout.write(serialize_program(loop_table(name)))
    return EXIT_OK


def cmd_loop_list() -> int:
    for name in LOOP_NAMES:
        p = loop_table(name)
        print(f"{name:<4}  steps={p.nsteps}  axes={','.join(p.axes)}  default={p.default_axis}  "
              f"directions={' '.join(p.directions)}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# qft demos


def _axis(name: str):
    try:
        return AXES[name]
    except KeyError:
        raise UsageError(f"axis must be one of {', '.join(AXES)}, not {name!r}") from None


def cmd_qft(args) -> int:
    sub = args.demo
    out = args.output
    if sub == "delta":
        u, v = (_axis(a) for a in args.axes)
        d = qft.delta_demo(args.b, (u, v), args.grid)
        print(f"commuting_residual {fmt(d.commuting_residual)}")
        print(f"noncommuting_gap {fmt(d.noncommuting_gap)} at lambda={fmt(d.argmax[0])} lambda'={fmt(d.argmax[1])}")
        if out:
            write_csv(out, ("quantity", "value"), [("commuting_residual", fmt(d.commuting_residual)),
                                                   ("noncommuting_gap", fmt(d.noncommuting_gap))])
    elif sub == "stft":
        rng = np.random.default_rng(args.seed)
        n = np.arange(args.n)
        x = np.zeros((args.n, 4))
        x[:, 0] = np.cos(0.002 * n ** 2)
        x[:, 2] = np.sin(0.002 * n ** 2)
        x[:, 1:] += 0.1 * rng.normal(size=(args.n, 3))
        res = qft.stft(x, window=args.window, nperseg=args.nperseg, axis=_axis(args.axis))
        err = float(np.abs(qft.istft(res) - x).max())
        print(f"frames {res.frames.shape[0]} bins {res.frames.shape[1]} round_trip_error {fmt(err)}")
        mag = np.linalg.norm(res.frames, axis=-1)
        rows = [(m, k, fmt(mag[m, k])) for m in range(mag.shape[0]) for k in range(mag.shape[1])]
        write_csv(out, ("frame", "bin", "magnitude"), rows)
    elif sub == "hysteresis":
        pts = hysteresis_curve(args.n)
        write_csv(out, ("ell", "f23", "f32"), [tuple(fmt(v) for v in p) for p in pts])
        path = _svg_path(out, args.svg, "hysteresis.svg")
        if path:
            _write_text(path, svg_plot({"f23 vs f32": ([p[1] for p in pts], [p[2] for p in pts])},
                                       "hysteresis curve", {"f23 vs f32": "blue"}))
    elif sub == "sinsurface":
        g = np.linspace(-math.pi, math.pi, args.n)
        rows = [(fmt(a), fmt(b), *(fmt(v) for v in sinsurface(a, b))) for a in g for b in g]
        write_csv(out, ("u", "v", "x", "y", "z"), rows)
    elif sub == "polar-volume":
        est, se = qft.ball_volume_mc(args.samples, args.seed)
        exact = math.pi ** 2 / 2
        print(f"estimate {fmt(est)} std_error {fmt(se)} exact {fmt(exact)} rel_error {fmt(abs(est - exact) / exact)}")
        if out:
            write_csv(out, ("quantity", "value"), [("estimate", fmt(est)), ("std_error", fmt(se)),
                                                   ("exact", fmt(exact))])
    else:  # argparse restricts choices; kept for direct callers
        raise UsageError(f"unknown qft demo {sub!r}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def _run_parser(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value file with RunConfig fields; flags override it")
    p.add_argument("--loop", help="loop name, comma list or 'all'")
    p.add_argument("--axis", dest="time_axis", choices=("e1e4", "e2e4", "e3e4"))
    p.add_argument("--jmin", dest="j_min", type=float)
    p.add_argument("--jmax", dest="j_max", type=float)
    p.add_argument("--jstep", dest="j_step", type=float)
    p.add_argument("--j0", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--sets", dest="nsets", type=int)
    p.add_argument("--du", type=float)
    p.add_argument("--dt", type=float)
    p.add_argument("-o", "--output", dest="output_path", help="CSV path ('-' or absent: stdout)")
    p.add_argument("--svg", nargs="?", const=True, default=None,
                   help="also write an SVG plot (optional path; default next to the CSV)")
    p.add_argument("--plot-step", dest="plot_step", type=int, help="step plotted in the SVG (default 3)")
    p.add_argument("--verbatim-steps", dest="verbatim", action="store_const", const=True, default=None,
                   help="use the as-printed coefficient schedule instead of the symmetrized one")
    p.add_argument("--workers", type=int)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="quatloops", description="Quaternion loop spectra and transforms.")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("verify", help="check the Clifford catalog identities")

    lp = sub.add_parser("loop", help="loop programs and sweeps")
    lsub = lp.add_subparsers(dest="action", required=True)
    _run_parser(lsub.add_parser("run", help="sweep j and write CSV rows"))
    sp = lsub.add_parser("show", help="print loop programs")
    sp.add_argument("names", nargs="+")
    lsub.add_parser("list", help="list encoded loops")

    qp = sub.add_parser("qft", help="transform demos")
    qsub = qp.add_subparsers(dest="demo", required=True)
    d = qsub.add_parser("delta")
    d.add_argument("--axes", nargs=2, default=("i", "j"))
    d.add_argument("--b", type=float, default=1.0)
    d.add_argument("--grid", type=int, default=16)
    s = qsub.add_parser("stft")
    s.add_argument("--n", type=int, default=256)
    s.add_argument("--nperseg", type=int, default=32)
    s.add_argument("--window", default="hann", choices=("hann", "rect"))
    s.add_argument("--axis", default="i")
    s.add_argument("--seed", type=int, default=0)
    h = qsub.add_parser("hysteresis")
    h.add_argument("--n", type=int, default=256)
    h.add_argument("--svg", nargs="?", const=True, default=None)
    ss = qsub.add_parser("sinsurface")
    ss.add_argument("--n", type=int, default=33)
    pv = qsub.add_parser("polar-volume")
    pv.add_argument("--samples", type=int, default=1_000_000)
    pv.add_argument("--seed", type=int, default=7)
    for q in (d, s, h, ss, pv):
        q.add_argument("-o", "--output", default=None)
    return ap


def config_from_args(args) -> RunConfig:
    base = read_config(args.config) if args.config else {}
    names = {f.name for f in fields(RunConfig)}
    for key in names:
        val = getattr(args, key, None)
        if val is not None and not (key == "emit_svg"):
            base[key] = val
    if args.svg is not None:
        base["emit_svg"] = True
    return replace(RunConfig(), **base).validate()


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    try:
        if args.command == "verify":
            return cmd_verify()
        if args.command == "loop":
            if args.action == "list":
                return cmd_loop_list()
            if args.action == "show":
                return cmd_loop_show(args.names)
            return cmd_loop(config_from_args(args), svg=args.svg)
        return cmd_qft(args)
    except (UsageError, ValueError) as exc:
        print(f"quatloops: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
