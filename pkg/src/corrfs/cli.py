"""Command-line harness: ``corrfs {run,synth,heatmap,stats}``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 internal invariant
violation. Output files are written only after every computation succeeded.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from importlib import resources
from pathlib import Path

from .analysis import write_heatmap_csv, write_trajectory_csv, mean_size_trajectory
from .data import DataError, generate_synthetic, write_csv
from .experiment import (
    DATA_KEY,
    ExperimentConfig,
    dumps_report,
    heatmap_experiment,
    load_dataset,
    run_experiment,
    run_report,
    stats_report,
)
from .rng import RandomSource

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_experiment_flags(p, runs_default):
    p.add_argument("--dataset", default="synthetic",
                   help="CSV path, or 'synthetic' / 'synthetic-wide' for the built-in generators")
    p.add_argument("--label", default="-1", help="label column name or index (default: last column)")
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--runs", type=int, default=runs_default)
    p.add_argument("--evals", type=int, default=500, help="fitness evaluations per run")
    p.add_argument("--change-factor", type=float, default=0.01)
    p.add_argument("--strong-mult", type=int, default=2)
    p.add_argument("--k", type=int, default=5, help="neighbours for the k-NN evaluator")
    p.add_argument("--protocol", choices=("holdout", "paper-mirror"), default="holdout")
    p.add_argument("--gate", choices=("previous", "best"), default="previous",
                   help="model updates need the winner to beat the previous winner or the best so far")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="corrfs", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="run the selector and write a JSON report")
    _add_experiment_flags(p, 10)
    p.add_argument("--out", required=True, help="report path (JSON)")
    p.add_argument("--trajectory-out", help="optional CSV of the run-averaged winner size")

    p = sub.add_parser("synth", help="write the 10-feature synthetic dataset as CSV")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=250)
    p.add_argument("--noise", type=float, default=0.02)
    p.add_argument("--out", required=True)

    p = sub.add_parser("heatmap", help="aggregate conditional-probability heatmap over runs")
    _add_experiment_flags(p, 100)
    p.add_argument("--heatmap-out", "--out", dest="heatmap_out", required=True)

    p = sub.add_parser("stats", help="Wilcoxon, Friedman and average ranks over methods")
    p.add_argument("inputs", nargs="*", help="run-report JSON files, one per method (paired by run index)")
    p.add_argument("--scores", help="CSV score table: first column dataset, one column per method")
    p.add_argument("--builtin-table", action="store_true",
                   help="use the bundled ACC x PDF table (7 methods x 13 datasets)")
    p.add_argument("--metric", default="acc_pdf", help="metric taken from run reports")
    p.add_argument("--reference", help="method compared against all others (default: last)")
    p.add_argument("--lower-is-better", action="store_true")
    p.add_argument("--out", help="report path (JSON); stdout when omitted")
    return parser


def _config(args) -> ExperimentConfig:
    try:
        cfg = ExperimentConfig(args.dataset, args.label, args.seed, args.runs, args.evals,
                               args.change_factor, args.strong_mult, args.k, args.protocol,
                               args.gate)
        if cfg.evals != 0:
            cfg.run_config(0)
        return cfg
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _check_budget(evals, allow_zero=False):
    if allow_zero and evals == 0:
        return
    if evals < 2 or evals % 2:
        raise UsageError(f"--evals must be an even number >= 2, got {evals}")


def cmd_run(args) -> int:
    cfg = _config(args)
    _check_budget(cfg.evals)
    ds = load_dataset(cfg)
    results = run_experiment(cfg, ds)
    report = run_report(cfg, results, ds)
    for entry in report["runs"]:
        if entry["evaluations"] != cfg.evals:
            raise AssertionError(f"run {entry['run_index']} used {entry['evaluations']} evaluations")
    text = dumps_report(report)
    Path(args.out).write_text(text, encoding="utf-8")
    if args.trajectory_out:
        write_trajectory_csv(mean_size_trajectory([r.trace for r in results]), args.trajectory_out)
    agg = report["aggregate"]
    print(f"{cfg.runs} runs: mean subset size {agg['mean_subset_size']:.2f} "
          f"(best {agg['best_subset_size']}), mean accuracy {agg['mean_accuracy']:.4f}, "
          f"mean ACCxPDF {agg['mean_acc_pdf']:.4f}")
    return EXIT_OK


def cmd_synth(args) -> int:
    if args.seed < 0:
        raise UsageError("--seed must be non-negative")
    try:
        ds = generate_synthetic(RandomSource(args.seed).spawn(DATA_KEY), args.samples, args.noise)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    write_csv(ds, args.out)
    return EXIT_OK


def cmd_heatmap(args) -> int:
    cfg = _config(args)
    _check_budget(cfg.evals, allow_zero=True)
    H = heatmap_experiment(cfg)
    write_heatmap_csv(H, args.heatmap_out)
    return EXIT_OK


def _read_score_table(text, source):
    rows = [r for r in csv.reader(text.splitlines()) if r]
    if len(rows) < 2:
        raise DataError(f"{source}: need a header and at least one dataset row")
    header = [h.strip() for h in rows[0]]
    methods = header[1:]
    datasets, table = [], []
    for line, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise DataError(f"{source}: ragged input at row {line} ({len(row)} cells, header has {len(header)})")
        datasets.append(row[0].strip())
        try:
            table.append([float(c) for c in row[1:]])
        except ValueError:
            raise DataError(f"{source}: non-numeric score at row {line}") from None
    scores = [[table[d][m] for d in range(len(datasets))] for m in range(len(methods))]
    return scores, methods, datasets


def _read_reports(paths, metric):
    methods, columns = [], []
    for path in paths:
        path = Path(path)
        if not path.is_file():
            raise DataError(f"no such file: {path}")
        try:
            rep = json.loads(path.read_text(encoding="utf-8"))
            values = [r["metrics"][metric] if metric in r["metrics"] else r[metric] for r in rep["runs"]]
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise DataError(f"{path}: not a run report with metric {metric!r} ({exc})") from None
        methods.append(path.stem)
        columns.append(values)
    if len({len(c) for c in columns}) != 1:
        raise DataError("ragged input: run reports have different numbers of runs")
    return columns, methods, [f"run{i}" for i in range(len(columns[0]))]


def cmd_stats(args) -> int:
    sources = sum([bool(args.inputs), bool(args.scores), args.builtin_table])
    if sources != 1:
        raise UsageError("give exactly one of: run-report files, --scores, --builtin-table")
    if args.builtin_table:
        text = resources.files("corrfs").joinpath("data/acc_pdf_13_datasets.csv").read_text(encoding="utf-8")
        scores, methods, datasets = _read_score_table(text, "builtin table")
    elif args.scores:
        path = Path(args.scores)
        if not path.is_file():
            raise DataError(f"no such file: {path}")
        scores, methods, datasets = _read_score_table(path.read_text(encoding="utf-8"), path)
    else:
        scores, methods, datasets = _read_reports(args.inputs, args.metric)
    try:
        report = stats_report(scores, methods, datasets, args.reference, not args.lower_is_better)
    except ValueError as exc:
        raise DataError(str(exc)) from None
    text = dumps_report(report)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        for w in report["wilcoxon"]:
            print(f"wilcoxon {report['reference']} vs {w['method']}: p = {w['pvalue_display']}")
        if report["friedman"]:
            print(f"friedman: statistic {report['friedman']['statistic']:.4f}, "
                  f"p = {report['friedman']['pvalue']:.3g}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


COMMANDS = {"run": cmd_run, "synth": cmd_synth, "heatmap": cmd_heatmap, "stats": cmd_stats}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"corrfs {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, OSError) as exc:
        print(f"corrfs {args.command}: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (AssertionError, RuntimeError) as exc:
        print(f"corrfs {args.command}: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
