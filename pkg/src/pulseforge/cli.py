"""Command-line frontend: ``sweep``, ``table``, ``validate`` and ``replay``.

Exit codes: 0 success, 1 tolerance or validation failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

import numpy as np

from . import analysis, validation
from .core import (
    ALTERNATE_TIME_REVERSAL,
    ALTERNATING,
    ALTERNATING_START_S,
    FIXED_ORDER,
    FIXED_P,
    FIXED_S,
    SAME,
    ErrorModel,
    SequenceSpec,
)
from .propagate import IntegratorConfig
from .pulses import CASE1_KINDS, CASE2_KINDS, make_case1, make_case2

EXIT_OK, EXIT_TOLERANCE, EXIT_USAGE = 0, 1, 2

_PHASES = {"same": SAME, "alt": ALTERNATING}
_ORDERS = {"fixed": FIXED_ORDER, "alt": ALTERNATE_TIME_REVERSAL}
_ASSIGN = {"fixed-p": FIXED_P, "fixed-s": FIXED_S, "alt": ALTERNATING_START_S}
_ERROR_LABELS = {"rabi": "Rabi error lambda", "detuning": "detuning delta (1/T)", "arm": "arm error eta"}


class UsageError(Exception):
    """Invalid flag combination; reported on one line with exit code 2."""


def artifact_version() -> str:
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "unknown"


def _parse_grid(text: str) -> tuple:
    try:
        lo, hi, points = text.split(":")
        return float(lo), float(hi), int(points)
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must be min:max:points, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pulseforge", description="Composite-pulse error sensing simulator.")
    sub = parser.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", help="population profile of an N-pulse sequence versus one error")
    sw.add_argument("--case", type=int, choices=(1, 2), required=True)
    sw.add_argument("--pulse", required=True, help=f"case1: {', '.join(CASE1_KINDS)}; case2: {', '.join(CASE2_KINDS)}")
    sw.add_argument("--n", type=int, default=1, help="number of pulses")
    sw.add_argument("--phase", choices=sorted(_PHASES), default="same")
    sw.add_argument("--order", choices=sorted(_ORDERS), default="fixed",
                    help="alt: time-reverse the pump/Stokes pair on even pulses (case 2)")
    sw.add_argument("--error", choices=("rabi", "detuning", "arm"), default="rabi")
    sw.add_argument("--assign", choices=sorted(_ASSIGN), default=None, help="arm receiving the error (--error arm)")
    sw.add_argument("--grid", type=_parse_grid, default=None, help="min:max:points, symmetric with odd points")
    sw.add_argument("--observable", choices=("p1", "p3"), default=None,
                    help="default: p3 for odd N, p1 for even N")
    sw.add_argument("--sta-n", type=float, default=0.5, help="free parameter of the STA pulse")
    sw.add_argument("--out", default="sweep", help="output path stem")

    tb = sub.add_parser("table", help="reproduce a FWHM table")
    tb.add_argument("--id", type=int, choices=(1, 2, 3), required=True)
    tb.add_argument("--tolerance", type=float, default=None,
                    help="uniform relative tolerance replacing the per-column ones")
    tb.add_argument("--out-dir", default=".")

    sub.add_parser("validate", help="run the invariant groups")

    rp = sub.add_parser("replay", help="re-run the command recorded in a manifest")
    rp.add_argument("manifest")
    return parser


# --- sweep ---------------------------------------------------------------------

def _sweep_config(args) -> analysis.SweepConfig:
    kinds = CASE1_KINDS if args.case == 1 else CASE2_KINDS
    if args.pulse not in kinds:
        raise UsageError(f"--pulse {args.pulse} is not a case {args.case} pulse; choose from {', '.join(kinds)}")
    if args.n < 1:
        raise UsageError("--n must be at least 1")
    if args.case == 1 and args.error == "arm":
        raise UsageError("--error arm needs two independent arms; case 1 drives both with one field")
    if args.case == 2 and args.error == "detuning":
        raise UsageError("--error detuning applies to case 1 only")
    if args.assign is not None and args.error != "arm":
        raise UsageError("--assign only applies to --error arm")
    if args.case == 1 and args.order != "fixed":
        raise UsageError("--order alt (time reversal) applies to case 2 only")

    pulse = make_case1(args.pulse, n=args.sta_n) if args.case == 1 else make_case2(args.pulse)
    if args.error == "rabi":
        error = ErrorModel.rabi(0.0)
    elif args.error == "detuning":
        error = ErrorModel.detuning(0.0)
    else:
        error = ErrorModel.arm(0.0, _ASSIGN[args.assign or "fixed-p"])
    spec = SequenceSpec(args.n, _PHASES[args.phase], _ORDERS[args.order])
    try:
        return analysis.SweepConfig(pulse, spec, error, args.grid, args.observable or "auto")
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def csv_text(errors, populations) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["error", "population"])
    for x, p in zip(errors, populations):
        writer.writerow([repr(float(x)), repr(float(p))])
    return buf.getvalue()


def svg_plot(curves, xlabel: str, ylabel: str = "population", width: int = 640, height: int = 400) -> str:
    """Minimal SVG 1.1 line chart; ``curves`` is a list of ``(label, x, y)``."""
    left, right, top, bottom = 60, 20, 20, 50
    xs = np.concatenate([np.asarray(c[1], dtype=float) for c in curves])
    x0, x1 = float(xs.min()), float(xs.max())
    if x1 == x0:
        x0, x1 = x0 - 1.0, x1 + 1.0
    y0, y1 = 0.0, 1.0
    pw, ph = width - left - right, height - top - bottom

    def px(x):
        return left + (x - x0) / (x1 - x0) * pw

    def py(y):
        return top + (1.0 - (y - y0) / (y1 - y0)) * ph

    colors = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}" stroke="black"/>',
    ]
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        xv, yv = x0 + frac * (x1 - x0), y0 + frac * (y1 - y0)
        out.append(f'<text x="{px(xv):.2f}" y="{top + ph + 16}" font-size="11" text-anchor="middle">{xv:.3g}</text>')
        out.append(f'<text x="{left - 6}" y="{py(yv) + 4:.2f}" font-size="11" text-anchor="end">{yv:.2g}</text>')
    out.append(f'<text x="{left + pw / 2:.1f}" y="{height - 10}" font-size="12" text-anchor="middle">{xlabel}</text>')
    out.append(f'<text x="14" y="{top + ph / 2:.1f}" font-size="12" text-anchor="middle" '
               f'transform="rotate(-90 14 {top + ph / 2:.1f})">{ylabel}</text>')
    for i, (label, x, y) in enumerate(curves):
        color = colors[i % len(colors)]
        pts = " ".join(f"{px(float(a)):.2f},{py(float(b)):.2f}" for a, b in zip(x, y))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        ly = top + 14 + 16 * i
        out.append(f'<line x1="{left + pw - 110}" y1="{ly - 4}" x2="{left + pw - 90}" y2="{ly - 4}" stroke="{color}"/>')
        out.append(f'<text x="{left + pw - 85}" y="{ly}" font-size="11">{label}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _manifest(command: str, argv: list, config: dict, started: float) -> str:
    cfg = IntegratorConfig.from_env()
    doc = {
        "command": command,
        "argv": argv,
        "config": config,
        "artifact_version": artifact_version(),
        "integrator": {"method": "rk4", "steps_per_T": cfg.steps_per_T,
                       "unitarity_tolerance": cfg.unitarity_tolerance},
        "wall_time_s": round(time.perf_counter() - started, 3),
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def cmd_sweep(args, argv) -> int:
    started = time.perf_counter()
    cfg = _sweep_config(args)
    result = analysis.sweep(cfg)
    stem = Path(args.out)
    label = f"{args.pulse} N={args.n} {args.phase}"
    files = {
        stem.with_name(stem.name + ".csv"): csv_text(result.errors, result.populations),
        stem.with_name(stem.name + ".svg"): svg_plot([(label, result.errors, result.populations)],
                                                     _ERROR_LABELS[args.error]),
    }
    config = {k: v for k, v in vars(args).items() if k != "func"}
    config["grid"] = list(cfg.grid)
    config["observable"] = ("p1", "p1", "p3")[cfg.observable_index]
    files[stem.with_name(stem.name + ".manifest.json")] = _manifest("sweep", argv, config, started)
    for path, text in files.items():
        _write(path, text)
    width = "none" if result.fwhm is None else f"{result.fwhm:.6f}"
    print(f"{len(result.errors)} points written to {stem}.csv")
    print(f"peak={result.peak:.6f} fwhm={width}")
    return EXIT_OK


# --- table ---------------------------------------------------------------------

def _fmt(x) -> str:
    return "" if x is None else repr(float(x))


def table_csv(cells) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["scheme", "N", "computed", "paper", "abs_dev", "rel_dev"])
    for c in cells:
        writer.writerow([c.scheme, c.N, _fmt(c.computed), repr(float(c.paper)), _fmt(c.abs_dev), _fmt(c.rel_dev)])
    return buf.getvalue()


def cmd_table(args, argv) -> int:
    started = time.perf_counter()
    if args.tolerance is not None and not args.tolerance > 0:
        raise UsageError("--tolerance must be positive")
    tol = None if args.tolerance is None else analysis.Tolerance("rel", args.tolerance)
    cells = analysis.reproduce_table(args.id, tolerance=tol)
    out_dir = Path(args.out_dir)
    _write(out_dir / f"table{args.id}.csv", table_csv(cells))
    config = {"id": args.id, "tolerance": args.tolerance, "out_dir": args.out_dir}
    _write(out_dir / f"table{args.id}.manifest.json", _manifest("table", argv, config, started))
    for c in cells:
        status = "PASS" if c.passed else "FAIL"
        computed = "n/a" if c.computed is None else f"{c.computed:.4f}"
        line = f"{status} {c.scheme:<12} N={c.N} computed={computed} reference={c.paper:g} ({c.tolerance})"
        print(line + (f" [{c.note}]" if c.note else ""))
    failed = sum(not c.passed for c in cells)
    print(f"{len(cells) - failed}/{len(cells)} cells within tolerance")
    return EXIT_OK if failed == 0 else EXIT_TOLERANCE


# --- validate / replay ----------------------------------------------------------

def cmd_validate(args, argv) -> int:
    results = validation.run_all()
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.group}: {r.detail}")
    return EXIT_OK if all(r.passed for r in results) else EXIT_TOLERANCE


def cmd_replay(args, argv) -> int:
    try:
        doc = json.loads(Path(args.manifest).read_text(encoding="utf-8"))
        recorded = list(doc["argv"])
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read manifest {args.manifest}: {exc}") from None
    if recorded and recorded[0] == "replay":
        raise UsageError("manifest records a replay")
    return main(recorded)


_COMMANDS = {"sweep": cmd_sweep, "table": cmd_table, "validate": cmd_validate, "replay": cmd_replay}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return _COMMANDS[args.command](args, argv)
    except UsageError as exc:
        print(f"pulseforge {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
