"""Command-line front end.

Subcommands: ``classify`` (decide a test file against training files),
``bounds`` (evaluate any closed-form bound), ``simulate`` (run a JSON-config
experiment to CSV), ``figures`` (run a canned experiment to CSV).  Exit code
0 on success, 1 on usage errors, 2 on data errors; errors go to stderr as
one line ``ERROR:<code>: message``.  Hypothesis indices are printed 1-based;
everything internal stays 0-based.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import math
import sys
from typing import List, Optional

from .bounds import (
    BOUND_VARIANTS,
    BoundParams,
    Regime,
    combined_bound,
    delta_star,
    dgl_error_bound,
    estimation_error_bound,
    theorem_bound,
)
from .classifier import classify, train
from .distributions import read_sequence, validate_distribution
from .errors import DglClassError, ParseError
from .montecarlo import (
    ExperimentConfig,
    LargeAlphabetFamilySpec,
    ResultRow,
    fig1_config,
    fig2_config,
    run_experiment,
)

CSV_COLUMNS = [
    "experiment",
    "n",
    "N",
    "alpha",
    "M",
    "alphabet",
    "trials",
    "errors",
    "error_rate",
    "ci_low",
    "ci_high",
    "map_error_rate",
    "bound_thm1",
    "bound_cor1",
    "bound_thm2",
    "bound_cor2",
    "min_tv_nominal",
    "min_tv_true",
]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def format_float(value: float) -> str:
    """12 significant digits; scientific notation below 1e-4 in magnitude."""
    return f"{value:.12g}"


def _cell(value: Optional[float]) -> str:
    if value is None:
        return ""
    if isinstance(value, float) and not math.isfinite(value):
        return ""
    return format_float(value)


def write_rows_csv(handle, rows: List[ResultRow]) -> None:
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(
            [
                row.experiment,
                str(row.n),
                str(row.train_length),
                format_float(row.alpha),
                str(row.num_hypotheses),
                str(row.alphabet),
                str(row.trials),
                str(row.error_count),
                format_float(row.error_rate),
                format_float(row.ci_low),
                format_float(row.ci_high),
                _cell(row.map_error_rate),
                _cell(row.bound_values.get("thm1")),
                _cell(row.bound_values.get("cor1")),
                _cell(row.bound_values.get("thm2")),
                _cell(row.bound_values.get("cor2")),
                format_float(row.min_tv_nominal),
                format_float(row.min_tv_true),
            ]
        )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dglclass", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_classify = sub.add_parser("classify", help="classify a test sequence file")
    p_classify.add_argument(
        "--train",
        action="append",
        required=True,
        metavar="FILE",
        help="training sequence file, one per hypothesis (repeat; order = hypothesis order)",
    )
    p_classify.add_argument("--test", required=True, metavar="FILE")
    p_classify.add_argument("--alphabet", type=int, required=True)
    p_classify.set_defaults(handler=_cmd_classify)

    p_bounds = sub.add_parser("bounds", help="evaluate a closed-form error bound")
    p_bounds.add_argument(
        "--which",
        required=True,
        choices=["dgl", "estimation", "combined", "delta-star"] + list(BOUND_VARIANTS),
    )
    p_bounds.add_argument("--n", type=int)
    p_bounds.add_argument("--alpha", type=float)
    p_bounds.add_argument("--m", type=int, help="number of hypotheses M")
    p_bounds.add_argument("--alphabet", type=int)
    p_bounds.add_argument("--min-tv", type=float, dest="min_tv")
    p_bounds.add_argument("--delta", type=float)
    p_bounds.add_argument("--regime", choices=["small", "large"])
    p_bounds.set_defaults(handler=_cmd_bounds)

    p_sim = sub.add_parser("simulate", help="run an experiment from a JSON config")
    p_sim.add_argument("--config", required=True, metavar="FILE")
    p_sim.add_argument("--out", required=True, metavar="FILE")
    p_sim.add_argument("--seed", type=int, default=None, help="override master_seed")
    p_sim.add_argument("--trials", type=int, default=None, help="override trials")
    p_sim.add_argument("--threads", type=int, default=None, help="scheduling hint only")
    p_sim.set_defaults(handler=_cmd_simulate)

    p_fig = sub.add_parser("figures", help="run a canned experiment")
    p_fig.add_argument("--which", required=True, choices=["fig1", "fig2"])
    p_fig.add_argument("--out", required=True, metavar="FILE")
    p_fig.add_argument("--seed", type=int, default=0)
    p_fig.add_argument("--trials", type=int, default=None)
    p_fig.add_argument("--threads", type=int, default=1, help="scheduling hint only")
    p_fig.set_defaults(handler=_cmd_figures)

    return parser


def _cmd_classify(args) -> None:
    if len(args.train) < 2:
        raise _UsageError("at least two --train files are required")
    training = [read_sequence(path) for path in args.train]
    test = read_sequence(args.test)
    clf = train(training, args.alphabet)
    decision = classify(clf, test)
    print(f"hypothesis {decision.chosen + 1}")
    print("statistics " + " ".join(format_float(s) for s in decision.statistics))


def _require(args, names) -> None:
    missing = [name for name in names if getattr(args, name.replace("-", "_")) is None]
    if missing:
        flags = ", ".join("--" + name.replace("_", "-") for name in missing)
        raise _UsageError(f"--which {args.which} requires {flags}")


def _cmd_bounds(args) -> None:
    which = args.which
    if which == "dgl":
        _require(args, ["n", "m", "delta"])
        print(f"value {format_float(dgl_error_bound(args.n, args.m, args.delta))}")
        return
    if which == "delta-star":
        _require(args, ["alpha", "min_tv", "alphabet", "regime"])
        value = delta_star(args.alpha, args.min_tv, args.alphabet, Regime(args.regime))
        print(f"value {format_float(value)}")
        return
    if which in ("estimation", "combined"):
        _require(args, ["n", "alpha", "m", "alphabet", "min_tv", "delta", "regime"])
        params = BoundParams(
            n=args.n,
            alpha=args.alpha,
            num_hypotheses=args.m,
            alphabet=args.alphabet,
            min_tv=args.min_tv,
            regime=Regime(args.regime),
            delta=args.delta,
        )
        fn = estimation_error_bound if which == "estimation" else combined_bound
        print(f"value {format_float(fn(params))}")
        return
    _require(args, ["n", "alpha", "m", "alphabet", "min_tv"])
    regime = Regime.SMALL if which in ("thm1", "cor1") else Regime.LARGE
    params = BoundParams(
        n=args.n,
        alpha=args.alpha,
        num_hypotheses=args.m,
        alphabet=args.alphabet,
        min_tv=args.min_tv,
        regime=regime,
    )
    report = theorem_bound(params, which)
    print(f"value {format_float(report.value)}")
    print(f"exponent {format_float(report.exponent)}")
    print(f"penalty {format_float(report.penalty)}")
    print(f"delta_star {format_float(report.delta_used)}")


def _config_from_json(doc: dict) -> ExperimentConfig:
    known = {
        "experiment",
        "alphas",
        "n_grid",
        "trials",
        "master_seed",
        "priors",
        "truths",
        "family",
        "compare_map",
        "bound_set",
        "ci_z",
    }
    unknown = set(doc) - known
    if unknown:
        raise ParseError(f"unknown config keys: {sorted(unknown)}")
    for key in ("alphas", "n_grid"):
        if key not in doc:
            raise ParseError(f"config is missing required key {key!r}")
    truths = None
    family = None
    if "truths" in doc and doc["truths"] is not None:
        truths = tuple(validate_distribution(row) for row in doc["truths"])
    if "family" in doc and doc["family"] is not None:
        fam = dict(doc["family"])
        unknown = set(fam) - {"num_hypotheses", "c", "alphabet_exponent"}
        if unknown:
            raise ParseError(f"unknown family keys: {sorted(unknown)}")
        family = LargeAlphabetFamilySpec(**fam)
    return ExperimentConfig(
        experiment=str(doc.get("experiment", "custom")),
        alphas=tuple(doc["alphas"]),
        n_grid=tuple(doc["n_grid"]),
        trials=int(doc.get("trials", 10_000)),
        master_seed=int(doc.get("master_seed", 0)),
        priors=tuple(doc["priors"]) if doc.get("priors") is not None else None,
        truths=truths,
        family=family,
        compare_map=bool(doc.get("compare_map", True)),
        bound_set=tuple(doc.get("bound_set", ())),
        ci_z=float(doc.get("ci_z", 3.0)),
    )


def _cmd_simulate(args) -> None:
    with open(args.config, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"config file {args.config}: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError(f"config file {args.config}: expected a JSON object")
    cfg = _config_from_json(doc)
    overrides = {}
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.threads is not None:
        overrides["threads"] = args.threads
    if overrides:
        cfg = dataclasses.replace(cfg, **overrides)
    rows = run_experiment(cfg)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        write_rows_csv(fh, rows)


def _cmd_figures(args) -> None:
    kwargs = {"master_seed": args.seed, "threads": args.threads}
    if args.trials is not None:
        kwargs["trials"] = args.trials
    cfg = fig1_config(**kwargs) if args.which == "fig1" else fig2_config(**kwargs)
    rows = run_experiment(cfg)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        write_rows_csv(fh, rows)


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"ERROR:Usage: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        args.handler(args)
    except _UsageError as exc:
        print(f"ERROR:Usage: {exc}", file=sys.stderr)
        return 1
    except DglClassError as exc:
        print(f"ERROR:{exc.code}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"ERROR:IO: {exc}", file=sys.stderr)
        return 2
    return 0


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
