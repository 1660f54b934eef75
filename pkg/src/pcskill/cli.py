"""Command-line interface: pc, grid-eval, compare, simulate.

Every command is a pure function of its input files, flags, and seed, so
repeated invocations produce identical output files. Exit codes: 0 success,
2 malformed input (with a line number for CSV), 3 well-formed but invalid
input (validation failure).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import metrics
from ._chart import metric_strip_chart
from .core import make_sample
from .errors import AllOutcomesEqualError, ParseError, VerificationError
from .fileio import read_grid, read_series
from .grid import evaluate_grid, skill_vs_reference
from .inference import gridpoint_p_values
from .metrics import METRIC_COLUMNS
from .scoring import pc
from .sim import SimConfig, run_study

REPORT_FIELDS = ("pc", "pc0", "pcs", "rmse", "mae", "ql", "acc", "cpa")


def _write_csv(path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\r\n")
        writer.writerow(header)
        writer.writerows(rows)


def _fmt(v) -> str:
    return repr(float(v))


def cmd_pc(args) -> int:
    _, x, y = read_series(args.input)
    sample = make_sample(x, y)
    summary = pc(sample)
    try:
        cpa_value = metrics.cpa(sample)
    except AllOutcomesEqualError:
        cpa_value = float("nan")
    report = {
        "n": sample.n,
        "alpha": args.alpha,
        "pc": summary.pc,
        "pc0": summary.pc0,
        "pcs": summary.pcs,
        "rmse": metrics.rmse(sample),
        "mae": metrics.mae(sample),
        "ql": metrics.quantile_loss(sample, args.alpha),
        "acc": metrics.acc(sample),
        "cpa": cpa_value,
    }
    if args.json:
        print(json.dumps(report))
    else:
        for name in REPORT_FIELDS:
            label = f"ql_{args.alpha:g}" if name == "ql" else name
            print(f"{label:<8} {_fmt(report[name])}")
    return 0


def cmd_grid_eval(args) -> int:
    forecast = read_grid(args.forecast)
    truth = read_grid(args.truth)
    report = evaluate_grid(forecast, truth, threads=args.threads)
    _write_csv(
        args.out,
        ["lat", "lon", "n_used", "pc", "pc0", "pcs"],
        [
            [_fmt(c.lat), _fmt(c.lon), str(c.n_used),
             _fmt(c.pc), _fmt(c.pc0), _fmt(c.pcs)]
            for c in report.cells
        ],
    )
    aggregate = {
        "aggregate_pc": report.aggregate_pc,
        "aggregate_pc0": report.aggregate_pc0,
        "aggregate_pcs": report.aggregate_pcs,
        "n_cells_used": len(report.cells),
        "excluded": [[lat, lon] for lat, lon in report.excluded],
    }
    with open(f"{args.out}.json", "w", encoding="utf-8") as f:
        json.dump(aggregate, f, separators=(",", ":"))
        f.write("\n")
    if args.skill_ref is not None:
        reference = evaluate_grid(
            read_grid(args.skill_ref), truth, threads=args.threads
        )
        cells = skill_vs_reference(report, reference)
        _write_csv(
            f"{args.out}.skill.csv",
            ["lat", "lon", "skill"],
            [[_fmt(c.lat), _fmt(c.lon), _fmt(c.skill)] for c in cells],
        )
    print(
        f"cells={len(report.cells)} excluded={len(report.excluded)} "
        f"aggregate_pc={_fmt(report.aggregate_pc)} "
        f"aggregate_pc0={_fmt(report.aggregate_pc0)} "
        f"aggregate_pcs={_fmt(report.aggregate_pcs)}"
    )
    return 0


def cmd_compare(args) -> int:
    model_a = read_grid(args.model_a)
    model_b = read_grid(args.model_b)
    truth = read_grid(args.truth)
    field = gridpoint_p_values(
        model_a,
        model_b,
        truth,
        lead_days=args.lead_days,
        n_permutations=args.permutations,
        seed=args.seed,
        threads=args.threads,
    )
    rows = []
    for i_lat, lat in enumerate(field.lats):
        for i_lon, lon in enumerate(field.lons):
            rows.append([_fmt(lat), _fmt(lon), _fmt(field.p[i_lat, i_lon])])
    _write_csv(args.out, ["lat", "lon", "p"], rows)
    finite = field.p[np.isfinite(field.p)]
    if finite.size:
        q = np.quantile(finite, [0.0, 0.25, 0.5, 0.75, 1.0])
    else:
        q = np.full(5, np.nan)
    _write_csv(
        f"{args.out}.summary.csv",
        ["lead_days", "n_cells", "p_min", "p_q1", "p_median", "p_q3", "p_max"],
        [[str(args.lead_days), str(int(finite.size))] + [_fmt(v) for v in q]],
    )
    print(
        f"cells={int(finite.size)} lead_days={args.lead_days} "
        f"median_p={_fmt(q[2])}"
    )
    return 0


def cmd_simulate(args) -> int:
    config = SimConfig(n=args.n, seed=args.seed, squared_outcome=args.squared)
    table = run_study(config)
    with open(args.out, "w", newline="", encoding="utf-8") as f:
        f.write(table.to_csv_text())
    chart = metric_strip_chart(
        [f"ql_{table.alpha:g}" if c == "ql" else c for c in METRIC_COLUMNS],
        list(table.models),
        table.values,
        title=f"simulation metrics (n={args.n}, seed={args.seed}"
        + (", squared outcome)" if args.squared else ")"),
    )
    with open(f"{args.out}.svg", "w", encoding="utf-8") as f:
        f.write(chart)
    print(table.to_text())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pcskill",
        description=(
            "Potential CRPS (PC) and PC skill of deterministic forecasts "
            "via in-sample isotonic distributional regression."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pc", help="score one forecast/outcome series")
    p.add_argument("--input", required=True, help="series CSV (time,x,y)")
    p.add_argument("--alpha", type=float, default=0.9,
                   help="quantile level for the pinball loss (default 0.9)")
    p.add_argument("--json", action="store_true",
                   help="emit one JSON object instead of aligned text")
    p.set_defaults(func=cmd_pc)

    p = sub.add_parser("grid-eval", help="per-cell PC over a lat-lon grid")
    p.add_argument("--forecast", required=True, help="forecast grid file")
    p.add_argument("--truth", required=True, help="ground-truth grid file")
    p.add_argument("--out", required=True,
                   help="per-cell CSV (aggregate JSON goes to OUT.json)")
    p.add_argument("--skill-ref", default=None,
                   help="reference grid; writes per-cell skill to OUT.skill.csv")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: $PC_THREADS or all cores)")
    p.set_defaults(func=cmd_grid_eval)

    p = sub.add_parser(
        "compare", help="per-cell block permutation test of model A vs B"
    )
    p.add_argument("--model-a", required=True, help="first model grid file")
    p.add_argument("--model-b", required=True, help="second model grid file")
    p.add_argument("--truth", required=True, help="ground-truth grid file")
    p.add_argument("--lead-days", type=int, required=True,
                   help="forecast lead in days (blocks span twice this)")
    p.add_argument("--permutations", type=int, default=1000,
                   help="permutation samples per cell (default 1000)")
    p.add_argument("--seed", type=int, default=0, help="base seed")
    p.add_argument("--out", required=True,
                   help="p-value CSV (quartiles go to OUT.summary.csv)")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: $PC_THREADS or all cores)")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("simulate", help="regenerate the simulation study table")
    p.add_argument("--n", type=int, default=10000,
                   help="sample size (default 10000)")
    p.add_argument("--seed", type=int, default=0, help="world seed")
    p.add_argument("--squared", action="store_true",
                   help="evaluate against the squared outcome")
    p.add_argument("--out", required=True,
                   help="metric table CSV (chart goes to OUT.svg)")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        line = getattr(exc, "line", None)
        where = f" at line {line}" if line is not None else ""
        print(f"error{where}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except VerificationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
