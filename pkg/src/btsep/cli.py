"""Command-line front end.

Artifacts go to stdout, diagnostics to stderr.  Exit codes: 0 success,
1 file error, 2 usage error, 3 invalid input data, 4 no convergence,
5 other fitting failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

from .datamodel import DataError, ModelKind, parse_dataset
from .diagram import DiagramOptions, class_diagram, to_dot
from .estimation import (
    ConvergenceError,
    FitError,
    FitOptions,
    LOSS,
    TIE,
    WIN,
    fit,
    prob_matrix_json,
    probability_matrix,
)
from .separation import format_provenance, format_relations, provenance_label, saturate
from .summary import PointSystem, format_standings, summarize, summary_json

EXIT_OK, EXIT_IO, EXIT_USAGE, EXIT_DATA, EXIT_CONVERGENCE, EXIT_FIT = 0, 1, 2, 3, 4, 5

log = logging.getLogger("btsep")


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: str
    model: ModelKind = ModelKind.BASIC
    half_win: bool = False
    points: PointSystem | None = None
    tol: float = 1e-10
    max_iter: int = 100_000
    format: str = "table"
    provenance: bool = False
    collapse_above: int | None = None
    collective_name: str = "Others"


def _separation_json(sep, provenance: bool) -> dict:
    names = [sep.item_label(k) for k in range(len(sep.items))]
    out = {
        "model": sep.model.value,
        "teams": list(sep.labels),
        "global": sep.global_class.name.lower(),
        "iterations": sep.iterations,
        "items": names,
        "classes": [[sep.item_label(k) for k in cls] for cls in sep.classes],
        "relations": {
            names[k]: {names[l]: sep.relation(k, l).name.lower() for l in range(len(names))} for k in range(len(names))
        },
    }
    if provenance:
        out["provenance"] = {
            names[k]: {names[l]: provenance_label(sep, k, l) for l in range(len(names)) if sep.closure.reach[k, l]}
            for k in range(len(names))
        }
    return out


def _separation_table(sep, provenance: bool) -> str:
    parts = [f"global: {sep.global_class.name.lower()}"]
    parts.append("classes:")
    for cls in sep.classes:
        parts.append("  {" + ", ".join(sep.item_label(k) for k in cls) + "}")
    out = "\n".join(parts) + "\n"
    for block in sep.blocks:
        out += "\n" + format_relations(sep, list(block), list(block))
    if provenance:
        out += "\n" + format_provenance(sep)
    return out


def _prob_table(pm) -> str:
    ks = [WIN, LOSS, TIE] if pm.model.has_ties else [WIN, LOSS]
    heads = {WIN: "p_win", LOSS: "p_loss", TIE: "p_tie"}
    width = max(4, max(len(s) for s in pm.labels))
    lines = [f"{'i':<{width}} {'j':<{width}} " + " ".join(f"{heads[k]:>9}" for k in ks)]
    for i, j in pm.pairs():
        if not pm.model.has_order and i > j:
            continue
        cells = " ".join(f"{str(pm[i, j, k]):>9}" for k in ks)
        lines.append(f"{pm.labels[i]:<{width}} {pm.labels[j]:<{width}} {cells}")
    return "\n".join(lines) + "\n"


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr

    def diag(msg: str) -> None:
        print(msg, file=stderr)

    try:
        text = sys.stdin.read() if cfg.input == "-" else Path(cfg.input).read_text(encoding="utf-8")
    except OSError as exc:
        diag(f"error: cannot read {cfg.input}: {exc.strerror or exc}")
        return EXIT_IO
    except UnicodeDecodeError as exc:
        diag(f"error: {cfg.input} is not UTF-8: {exc}")
        return EXIT_DATA
    try:
        ds = parse_dataset(text, cfg.model, cfg.half_win)
        if cfg.points is not None and not cfg.model.has_ties:
            raise DataError("--points needs a model with ties")
    except DataError as exc:
        diag(f"error: {exc}")
        return EXIT_DATA

    sep = saturate(ds)
    diag(f"separation: {sep.global_class.name.lower()} ({len(sep.classes)} classes, {sep.iterations} passes)")

    if cfg.command == "separate":
        if cfg.format == "json":
            stdout.write(json.dumps(_separation_json(sep, cfg.provenance), indent=2) + "\n")
        else:
            stdout.write(_separation_table(sep, cfg.provenance))
        return EXIT_OK

    try:
        result = fit(ds, sep, FitOptions(tol=cfg.tol, max_iter=cfg.max_iter))
    except ConvergenceError as exc:
        diag(f"error: {exc}")
        return EXIT_CONVERGENCE
    except FitError as exc:
        diag(f"error: {exc}")
        return EXIT_FIT
    diag(f"fit: {result.iterations} iterations, max residual {result.max_residual:.3g}")
    pm = probability_matrix(result)

    if cfg.command == "fit":
        if cfg.format == "json":
            stdout.write(json.dumps(prob_matrix_json(pm), indent=2) + "\n")
        else:
            stdout.write(_prob_table(pm))
        return EXIT_OK

    summary = summarize(pm, cfg.points, ds)
    if cfg.command == "rank":
        if cfg.format == "json":
            stdout.write(json.dumps(summary_json(summary), indent=2) + "\n")
        else:
            stdout.write(format_standings(summary))
        return EXIT_OK

    opts = DiagramOptions(collapse_above=cfg.collapse_above, collective_name=cfg.collective_name)
    stdout.write(to_dot(class_diagram(sep, summary), opts))
    return EXIT_OK


def _points(text: str) -> PointSystem:
    try:
        return PointSystem.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _model(text: str) -> ModelKind:
    try:
        return ModelKind.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", help="CSV of games: first_team,second_team,outcome ('-' for stdin)")
    common.add_argument("--model", type=_model, default=ModelKind.BASIC, help="basic, single-order, team-order, single-tie or team-tie")
    common.add_argument("--half-win", action="store_true", help="count ties as half a win for each side")
    common.add_argument("--tol", type=_positive_float, default=1e-10)
    common.add_argument("--max-iter", type=_positive_int, default=100_000)
    common.add_argument("--points", type=_points, help="points per win, loss, tie: c1,c2,c0")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="btsep", description="Bradley-Terry fits with separation analysis")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("separate", parents=[common], help="classify item pairs")
    p.add_argument("--format", choices=["table", "json"], default="table")
    p.add_argument("--provenance", action="store_true", help="print the step-labelled ⊵ table")
    p = sub.add_parser("fit", parents=[common], help="outcome probability estimates")
    p.add_argument("--format", choices=["table", "json"], default="table")
    p = sub.add_parser("rank", parents=[common], help="round-robin standings")
    p.add_argument("--format", choices=["table", "json"], default="table")
    p = sub.add_parser("diagram", parents=[common], help="class diagram in DOT")
    p.add_argument("--format", choices=["dot"], default="dot")
    p.add_argument("--collapse-above", type=int, default=None, help="label larger classes collectively")
    p.add_argument("--collective-name", default="Others")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(message)s")
    cfg = RunConfig(
        command=args.command,
        input=args.input,
        model=args.model,
        half_win=args.half_win,
        points=args.points,
        tol=args.tol,
        max_iter=args.max_iter,
        format=args.format,
        provenance=getattr(args, "provenance", False),
        collapse_above=getattr(args, "collapse_above", None),
        collective_name=getattr(args, "collective_name", "Others"),
    )
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
