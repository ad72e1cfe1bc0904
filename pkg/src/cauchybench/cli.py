"""Command-line front end.

Subcommands:
  run        execute an experiment (preset name or JSON config), write results JSON
  table      render a results JSON as a "mean (std)" score table
  compare    print the Kruskal-Wallis and pairwise rank-sum report
  influence  emit influence-curve CSV over a residual grid
  gen        export a synthetic dataset (optionally corrupted) to CSV

Exit codes: 0 success, 1 usage error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .datagen import NoiseFamily, NoiseSpec, apply_noise, export_csv, make_hc2, make_hc8
from .harness import (
    TrainConfig,
    config_from_dict,
    experiment_preset,
    list_presets,
    run_experiment,
)
from .losses import LossSpec
from .nets import TrainingDiverged
from .report import format_table, influence_csv, load_results, save_results

__all__ = ["cli_main", "main"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits on error; surface a catchable exception instead so
    # cli_main controls the exit code.
    def error(self, message):
        raise UsageError(message)


def _out_path(args, default_name: str) -> str:
    if args.out:
        return args.out
    return os.path.join(os.environ.get("CAUCHYBENCH_OUT_DIR", "."), default_name)


def _build_parser() -> _Parser:
    p = _Parser(prog="cauchybench", description=__doc__.strip().splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="execute an experiment and write results JSON")
    src = run.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", choices=list_presets(), help="named experiment")
    src.add_argument("--config", help="JSON experiment config file")
    run.add_argument("--seed", type=int, default=0, help="master seed (presets only)")
    run.add_argument("--out", help="results JSON path (default: results.json in $CAUCHYBENCH_OUT_DIR or .)")
    run.add_argument("--data", help="CSV path for the bike dataset")
    run.add_argument("--schema", help="JSON column-schema sidecar for --data")
    run.add_argument("--n", type=int, help="samples per replicate (or bike subsample size)")
    run.add_argument("--folds", type=int)
    run.add_argument("--replicates", type=int)
    run.add_argument("--epochs", type=int)
    run.add_argument("--batch-size", type=int)
    run.add_argument("--learning-rate", type=float)

    table = sub.add_parser("table", help="render a results JSON as a score table")
    table.add_argument("results", help="results JSON from `run`")
    table.add_argument("--metric", choices=["mae", "rmse"], default="mae")
    table.add_argument("--format", choices=["text", "csv"], default="text")

    comp = sub.add_parser("compare", help="print rank-test comparisons from a results JSON")
    comp.add_argument("results")
    comp.add_argument("--metric", choices=["mae", "rmse"], default="mae")

    infl = sub.add_parser("influence", help="emit influence-curve CSV")
    infl.add_argument("--loss", choices=["mse", "clf", "both"], default="both")
    infl.add_argument("--c", type=float, action="append", help="CLF constant (repeatable)")
    infl.add_argument("--rmax", type=float, default=10.0)
    infl.add_argument("--steps", type=int, default=10, help="grid points per unit residual")
    infl.add_argument("--out", help="write CSV here instead of stdout")

    gen = sub.add_parser("gen", help="export a synthetic dataset to CSV")
    gen.add_argument("--dataset", choices=["hc2", "hc8"], required=True)
    gen.add_argument("--n", type=int, default=5000)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", help="CSV path (default: <dataset>.csv)")
    gen.add_argument("--noise", choices=["none", "gaussian", "cauchy"], default="none")
    gen.add_argument("--sigma", type=float, help="Gaussian noise std")
    gen.add_argument("--tau", type=float, help="Cauchy noise scale")
    gen.add_argument("--x0", type=float, default=0.0, help="Cauchy location")
    return p


def _train_overrides(args) -> TrainConfig:
    kw = {}
    if args.epochs is not None:
        kw["epochs"] = args.epochs
    if args.batch_size is not None:
        kw["batch_size"] = args.batch_size
    if args.learning_rate is not None:
        kw["learning_rate"] = args.learning_rate
    return TrainConfig(**kw)


def _cmd_run(args) -> int:
    if args.config:
        if not os.path.exists(args.config):
            raise UsageError(f"no such config file: {args.config}")
        try:
            with open(args.config) as fh:
                cfg = config_from_dict(json.load(fh))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as err:
            raise UsageError(f"malformed config {args.config}: {err}") from err
    else:
        try:
            cfg = experiment_preset(
                args.preset,
                n_samples=args.n,
                data_path=args.data,
                schema_path=args.schema,
                folds=args.folds,
                replicates=args.replicates,
                master_seed=args.seed,
                train=_train_overrides(args),
            )
        except (KeyError, ValueError) as err:
            raise UsageError(str(err)) from err
    result = run_experiment(cfg)
    out = _out_path(args, "results.json")
    save_results(result, out)
    mae = result.comparisons.get("mae")
    kw_note = f", KW mae p={mae.kruskal.p_value:.4g}" if mae else ""
    print(f"wrote {out} ({len(cfg.models)} models x {cfg.replicates} replicates{kw_note})")
    return 0


def _load_results_arg(path) -> dict:
    if not os.path.exists(path):
        raise UsageError(f"no such results file: {path}")
    try:
        return load_results(path)
    except json.JSONDecodeError as err:
        raise UsageError(f"malformed results file {path}: {err}") from err


def _cmd_table(args) -> int:
    doc = _load_results_arg(args.results)
    sys.stdout.write(format_table(doc, args.metric, args.format))
    return 0


def _cmd_compare(args) -> int:
    doc = _load_results_arg(args.results)
    comp = doc.get("comparisons", {}).get(args.metric)
    if comp is None:
        raise UsageError(f"results file has no {args.metric} comparison (single model?)")
    kw = comp["kruskal_wallis"]
    print(f"Kruskal-Wallis ({args.metric}): H={kw['statistic']:.4f} p={kw['p_value']:.5f} [{kw['method']}]")
    print("Pairwise Wilcoxon rank-sum:")
    for pair in comp["pairwise"]:
        print(
            f"  {pair['model_a']:>10} vs {pair['model_b']:<10} "
            f"U={pair['statistic']:>6.1f}  p={pair['p_value']:.5f}  [{pair['method']}]"
        )
    return 0


def _cmd_influence(args) -> int:
    cs = args.c or [1.0]
    if args.loss == "mse":
        specs = [LossSpec.mse()]
    elif args.loss == "clf":
        specs = [LossSpec.clf(c) for c in cs]
    else:
        specs = [LossSpec.mse()] + [LossSpec.clf(c) for c in cs]
    try:
        text = influence_csv(specs, args.rmax, args.steps)
    except ValueError as err:
        raise UsageError(str(err)) from err
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_gen(args) -> int:
    maker = make_hc2 if args.dataset == "hc2" else make_hc8
    try:
        ds = maker(args.n, args.seed)
        if args.noise == "gaussian":
            ds = apply_noise(ds, NoiseSpec(NoiseFamily.GAUSSIAN, sigma=args.sigma, seed=args.seed))
        elif args.noise == "cauchy":
            ds = apply_noise(
                ds, NoiseSpec(NoiseFamily.CAUCHY, x0=args.x0, tau=args.tau, seed=args.seed)
            )
    except ValueError as err:
        raise UsageError(str(err)) from err
    out = args.out or f"{args.dataset}.csv"
    export_csv(ds, out)
    print(f"wrote {out} ({len(ds)} rows, {ds.n_features} features)")
    return 0


_COMMANDS = {
    "run": _cmd_run,
    "table": _cmd_table,
    "compare": _cmd_compare,
    "influence": _cmd_influence,
    "gen": _cmd_gen,
}


def cli_main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except FileNotFoundError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except TrainingDiverged as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_main())
