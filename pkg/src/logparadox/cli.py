"""Command-line entry point.

Every subcommand reads its data, calls into the library and writes a JSON
report (default) or a CSV table for plotting. Exit codes: 0 on success, 2 on
bad data, 64 on bad usage.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from typing import List, Optional, Sequence


from . import __version__
from .core import SampleVector, TransformOptions, base_sensitivity, log_transform, summarize
from .errors import LogParadoxError, NonFiniteElement, NonPositiveElement
from .finite_diff import Concat, Delete, Replace, closed_form_diff, condition_check, oracle_diff
from .generators import (
    DEFAULT_STRUCTURES_PER_CELL,
    REFERENCE_CELL_A,
    REFERENCE_CELL_B,
    REFERENCE_STATES,
    gen_exponential,
    gen_symmetric_tails,
    kmer_experiment,
    markov_model,
)
from .paradox import Selector, d_surface, insert_step, paradox_verdict, replace_step
from .report import ExperimentReport
from .resampling import moving_average, replacement_sweep
from .rng import make_rng, resolve_seed

EXIT_OK = 0
EXIT_DATA = 2
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


# argument types ---------------------------------------------------------------


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _positive_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}")
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return v


def _seed(text):
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer seed, got {text!r}")
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _float_list(text):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _int_list(text):
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


# CSV input --------------------------------------------------------------------


def _is_number(s):
    try:
        float(s)
        return True
    except ValueError:
        return False


def read_column(path: str, column: str = "0") -> SampleVector:
    """Read one column of a comma-separated file as a validated vector.

    The first row is a header when the selected field is not numeric.
    ``column`` is a header name or a 0-based index. Errors name the 0-based
    data row.
    """
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path, newline="", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            raise DataError(f"cannot read {path}: {e.strerror}")
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(f.strip() for f in r)]
    if not rows:
        raise DataError(f"{path}: no data rows")

    header = None
    if column.isdigit():
        col = int(column)
        if col < len(rows[0]) and not _is_number(rows[0][col]):
            header = rows[0]
    else:
        header = [h.strip() for h in rows[0]]
        if column not in header:
            raise DataError(f"{path}: no column named {column!r}")
        col = header.index(column)
    data = rows[1:] if header is not None else rows

    values = []
    for i, row in enumerate(data):
        if col >= len(row):
            raise DataError(f"{path}: row {i} has no column {column}")
        try:
            values.append(float(row[col]))
        except ValueError:
            raise DataError(f"{path}: row {i}: {row[col]!r} is not a number")
    if not values:
        raise DataError(f"{path}: no data rows")
    try:
        return SampleVector(values)
    except (NonPositiveElement, NonFiniteElement) as e:
        raise DataError(f"{path}: row {e.index}: value {e.value!r} must be finite and > 0")


# output -----------------------------------------------------------------------


def _csv_text(header: Sequence, rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in r])
    return buf.getvalue()


def _write(text: str, path: Optional[str]):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _emit(args, report: ExperimentReport, table=None):
    """Write the report as JSON, or ``table=(header, rows)`` as CSV."""
    if args.format == "csv":
        if table is None:
            raise UsageError(f"{args.command} has no CSV output")
        _write(_csv_text(*table), args.output)
    else:
        _write(report.to_json(), args.output)


def _kv_table(d: dict, prefix=""):
    rows = []
    for k, v in d.items():
        if isinstance(v, dict):
            rows.extend(_kv_table(v, f"{prefix}{k}.")[1])
        else:
            rows.append((f"{prefix}{k}", v))
    return ("key", "value"), rows


# commands ---------------------------------------------------------------------


def cmd_summary(args):
    x = read_column(args.input, args.column)
    summary = summarize(x)
    sens = base_sensitivity(x, args.base)
    warnings = []
    if sens.min_below_base:
        warnings.append(
            f"minimum {summary.min!r} is below log base {args.base!r}; small values are up-weighted"
        )
    results = {
        "base_sensitivity": {
            "base": sens.base,
            "min_below_base": sens.min_below_base,
            "derivative_at_min": sens.derivative_at_min,
        },
        "warnings": warnings,
    }
    if args.offset is not None:
        logs = log_transform(x, TransformOptions(base=args.base, offset=args.offset, mode="offset"))
        results["offset_log_mean"] = math.fsum(logs) / len(logs)
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    report = ExperimentReport.create(
        "summary",
        {"input": args.input, "column": args.column, "base": args.base, "offset": args.offset},
        seed=None,
        summaries={"x": summary.to_dict()},
        results=results,
    )
    _emit(args, report, _kv_table({"summary": summary.to_dict(), **results["base_sensitivity"]}))


def _perturbation(args):
    if args.op == "concat":
        return Concat(args.y)
    if args.op == "delete":
        return Delete(args.y)
    if args.z is None:
        raise UsageError("--op replace needs --z")
    return Replace(args.y, args.z)


def cmd_diff(args):
    x = read_column(args.input, args.column)
    p = _perturbation(args)
    closed = closed_form_diff(x, p)
    oracle = oracle_diff(x, p)
    pred = condition_check(x, p)
    delta = {
        k: abs(getattr(closed, k) - getattr(oracle, k)) for k in ("d_arith", "d_geom", "d_id")
    }
    results = {
        "op": args.op,
        "closed_form": closed.to_dict(),
        "oracle": oracle.to_dict(),
        "agreement_delta": delta,
        "predicted_signs": {"arith": pred.sign_arith, "geom": pred.sign_geom},
        "d_arith": closed.d_arith,
        "d_geom": closed.d_geom,
        "paradox_signed": closed.paradox_signed,
    }
    report = ExperimentReport.create(
        "diff",
        {"input": args.input, "column": args.column, "op": args.op, "y": args.y, "z": args.z},
        seed=None,
        summaries={"x": summarize(x).to_dict()},
        results=results,
    )
    table = (
        ("source", "d_arith", "d_geom", "d_id", "paradox_signed"),
        [
            ("closed_form", closed.d_arith, closed.d_geom, closed.d_id, closed.paradox_signed),
            ("oracle", oracle.d_arith, oracle.d_geom, oracle.d_id, oracle.paradox_signed),
        ],
    )
    _emit(args, report, table)


TRAJECTORY_HEADER = (
    "step", "n", "arith_mean", "geom_mean", "inter_mean_distance",
    "cum_delta_arith", "cum_delta_geom", "q", "precondition_holds",
)


def cmd_induce(args):
    x = read_column(args.input, args.column)
    seed = resolve_seed(args.seed)
    s0 = summarize(x)
    rows = [(0, s0.n, s0.arith_mean, s0.geom_mean, s0.inter_mean_distance, 0.0, 0.0, None, None)]
    cur = x
    for t in range(1, args.steps + 1):
        if args.mode == "insert":
            cur, info = insert_step(cur)
        elif args.mode == "replace-minmax":
            cur, info = replace_step(cur, Selector.MINMAX)
        else:
            cur, info = replace_step(cur, Selector.RANDOM, rng=make_rng(seed, t))
        s = summarize(cur)
        rows.append((
            t, s.n, s.arith_mean, s.geom_mean, s.inter_mean_distance,
            s.arith_mean - s0.arith_mean, s.geom_mean - s0.geom_mean,
            info.q, info.precondition_holds,
        ))
    verdict = paradox_verdict(x, cur)
    report = ExperimentReport.create(
        "induce",
        {"input": args.input, "column": args.column, "mode": args.mode, "steps": args.steps},
        seed=seed,
        summaries={"initial": s0.to_dict(), "final": summarize(cur).to_dict()},
        results={
            "verdict": verdict.to_dict(),
            "trajectory": [dict(zip(TRAJECTORY_HEADER, r)) for r in rows],
        },
    )
    table = (TRAJECTORY_HEADER, rows)
    if args.trajectory:
        _write(_csv_text(*table), args.trajectory)
    _emit(args, report, table)


SWEEP_HEADER = (
    "sample_size", "k", "p_geom", "p_arith", "p_geom_smoothed", "p_arith_smoothed",
    "d_arith", "d_geom", "direction_ok",
)


def cmd_bootstrap_sweep(args):
    x = read_column(args.input, args.column)
    seed = resolve_seed(args.seed)
    sweeps, rows, crossings = [], [], {}
    for s in args.sample_sizes:
        rep = replacement_sweep(
            x, max_fraction=args.max_fraction, step=args.step,
            sample_size=s, n_resamples=args.resamples, seed=seed,
        )
        sweeps.append(rep.to_dict())
        crossings[str(s)] = {str(a): k for a, k in rep.threshold_crossings.items()}
        pg = [p.p_value for p in rep.points]
        pa = [p.p_value_arith for p in rep.points]
        sg, sa = moving_average(pg, args.smooth), moving_average(pa, args.smooth)
        for i, p in enumerate(rep.points):
            rows.append((
                s, p.k, p.p_value, p.p_value_arith, float(sg[i]), float(sa[i]),
                p.d_arith_of_sample_means, p.d_geom_of_sample_means, p.paradox_direction_ok,
            ))
    report = ExperimentReport.create(
        "bootstrap-sweep",
        {
            "input": args.input, "column": args.column, "sample_sizes": args.sample_sizes,
            "resamples": args.resamples, "max_fraction": args.max_fraction,
            "step": args.step, "smooth": args.smooth,
        },
        seed=seed,
        summaries={"a": summarize(x).to_dict()},
        results={"threshold_crossings": crossings, "sweeps": sweeps},
    )
    _emit(args, report, (SWEEP_HEADER, rows))


def cmd_markov(args):
    seed = resolve_seed(args.seed)
    model_a = markov_model(args.model_a, args.states)
    model_b = markov_model(args.model_b, args.states)
    res = kmer_experiment(model_a, model_b, args.cells, args.per_cell, seed)
    results = res.to_dict()
    results["expected"] = {
        "arith_a": model_a.expected_volume(),
        "arith_b": model_b.expected_volume(),
        "geom_a": math.exp(model_a.expected_log_volume()),
        "geom_b": math.exp(model_b.expected_log_volume()),
    }
    results["models"] = {"a": model_a.to_dict(), "b": model_b.to_dict()}
    report = ExperimentReport.create(
        "markov",
        {
            "model_a": args.model_a, "model_b": args.model_b, "states": args.states,
            "cells": args.cells, "per_cell": args.per_cell,
        },
        seed=seed,
        summaries={
            "arith_means_a": summarize(res.arith_means_a).to_dict(),
            "arith_means_b": summarize(res.arith_means_b).to_dict(),
            "geom_means_a": summarize(res.geom_means_a).to_dict(),
            "geom_means_b": summarize(res.geom_means_b).to_dict(),
        },
        results=results,
    )
    rows = []
    for line, am, gm in (("A", res.arith_means_a, res.geom_means_a), ("B", res.arith_means_b, res.geom_means_b)):
        rows.extend((i, line, float(a), float(g)) for i, (a, g) in enumerate(zip(am, gm)))
    _emit(args, report, (("cell", "line", "arith_mean_volume", "geom_mean_volume"), rows))


def cmd_sweep_surface(args):
    for name, grid in (("--m-grid", args.m_grid), ("--M-grid", args.M_grid)):
        if not grid:
            raise UsageError(f"{name} is empty")
        for i, v in enumerate(grid):
            if not (math.isfinite(v) and v > 0):
                raise DataError(f"{name} entry {i} is {v!r}; grid values must be finite and > 0")
    surface = d_surface(args.m_grid, args.M_grid)
    report = ExperimentReport.create(
        "sweep-surface",
        {"m_grid": args.m_grid, "M_grid": args.M_grid},
        seed=None,
        results={"d_score": surface},
    )
    header = ["m\\M"] + [repr(float(v)) for v in args.M_grid]
    rows = [[float(m)] + [float(v) for v in row] for m, row in zip(args.m_grid, surface)]
    _emit(args, report, (header, rows))


def cmd_generate(args):
    seed = resolve_seed(args.seed)
    if args.kind == "exponential":
        x = gen_exponential(args.n, seed)
    else:
        x = gen_symmetric_tails(args.mu, args.sigma, args.n, seed)
    _write(_csv_text(("value",), [(v,) for v in x.tolist()]), args.output)


# parser -----------------------------------------------------------------------


def _common(p, seeded=False, csv_input=True):
    if csv_input:
        p.add_argument("input", help="CSV file ('-' for stdin)")
        p.add_argument("--column", default="0", help="column name or 0-based index (default 0)")
    p.add_argument("--output", "-o", default=None, help="output path (default stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    if seeded:
        p.add_argument("--seed", type=_seed, default=None,
                       help="64-bit master seed (default $LOGPARADOX_SEED or a fixed value)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="logparadox", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("summary", help="arithmetic/geometric mean summary of a column")
    _common(p)
    p.add_argument("--base", type=float, default=math.e)
    p.add_argument("--offset", type=float, default=None,
                   help="also report the mean of log(x - offset)")
    p.set_defaults(func=cmd_summary)

    p = sub.add_parser("diff", help="finite differences of both means under a perturbation")
    _common(p)
    p.add_argument("--op", choices=("concat", "delete", "replace"), required=True)
    p.add_argument("--y", type=_float_list, required=True, help="comma-separated values")
    p.add_argument("--z", type=_float_list, default=None, help="values removed by replace")
    p.set_defaults(func=cmd_diff)

    p = sub.add_parser("induce", help="apply insert or replacement heuristic steps")
    _common(p, seeded=True)
    p.add_argument("--mode", choices=("insert", "replace-minmax", "replace-random"), default="insert")
    p.add_argument("--steps", type=_positive_int, default=1)
    p.add_argument("--trajectory", default=None, help="also write the trajectory CSV here")
    p.set_defaults(func=cmd_induce)

    p = sub.add_parser("bootstrap-sweep", help="MWU p-values as random replacements accumulate")
    _common(p, seeded=True)
    p.add_argument("--sample-sizes", type=_int_list, default=[50, 100, 200])
    p.add_argument("--resamples", type=_positive_int, default=50)
    p.add_argument("--max-fraction", type=_positive_float, default=0.1)
    p.add_argument("--step", type=_positive_int, default=1)
    p.add_argument("--smooth", type=_positive_int, default=10, help="moving-average window for CSV")
    p.set_defaults(func=cmd_bootstrap_sweep)

    p = sub.add_parser("markov", help="simulated cells from two k-mer structure models")
    _common(p, seeded=True, csv_input=False)
    p.add_argument("--model-a", type=_int_list, default=list(REFERENCE_CELL_A))
    p.add_argument("--model-b", type=_int_list, default=list(REFERENCE_CELL_B))
    p.add_argument("--states", type=_int_list, default=list(REFERENCE_STATES))
    p.add_argument("--cells", type=_positive_int, default=1000)
    p.add_argument("--per-cell", type=_positive_int, default=DEFAULT_STRUCTURES_PER_CELL)
    p.set_defaults(func=cmd_markov)

    p = sub.add_parser("sweep-surface", help="d(m, M) over a grid of minima and maxima")
    _common(p, csv_input=False)
    p.add_argument("--m-grid", type=_float_list, required=True)
    p.add_argument("--M-grid", type=_float_list, required=True)
    p.set_defaults(func=cmd_sweep_surface)

    p = sub.add_parser("generate", help="write a generated dataset as CSV")
    p.add_argument("kind", choices=("exponential", "symmetric"))
    p.add_argument("--n", type=_positive_int, default=2000)
    p.add_argument("--mu", type=float, default=10.0)
    p.add_argument("--sigma", type=float, default=2.0)
    p.add_argument("--seed", type=_seed, default=None)
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        args.func(args)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    except (DataError, LogParadoxError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
