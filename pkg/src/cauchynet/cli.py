"""Command-line entry point.

Subcommands: fit | series | pinn | diagnose | sweep.  Settings come
from defaults, then an optional --config file, then flags (highest
precedence).  --seed accepts a comma list; with --jobs N independent
seeds run in parallel processes, each writing to out/seed<k>/, and
their metrics merge in seed order.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .config import ConfigError, build_config, parse_kv
from .metrics import metrics_to_csv
from .runner import ExperimentFailed, run_experiment

# subcommand -> [(flag, dotted key, help)]
_FLAG_MAP = {
    "fit": [
        ("--task", "task.name", "target function name"),
        ("--model", "model.kind", "xnet | mlp | kanlite | bspline"),
        ("--width", "model.width", "hidden width (xnet)"),
        ("--shape", "model.shape", "comma layer sizes (mlp/kanlite)"),
        ("--steps", "train.steps", "optimizer steps"),
        ("--lr", "train.lr", "learning rate"),
        ("--batch", "train.batch", "minibatch size (0 = full batch)"),
        ("--n-train", "task.n_train", "training samples"),
        ("--n-test", "task.n_test", "test samples"),
        ("--domain", "task.domain", "sampling box 'lo,hi'"),
        ("--degree", "model.degree", "spline degree"),
        ("--grid", "model.grid", "spline grid size"),
    ],
    "series": [
        ("--model", "model.kind", "xnet | kanlite | mlp"),
        ("--width", "model.width", "hidden width (xnet)"),
        ("--shape", "model.shape", "comma layer sizes"),
        ("--noise-sd", "task.noise_sd", "recurrence noise level"),
        ("--series-n", "task.series_n", "series length"),
        ("--steps", "train.steps", "optimizer steps"),
        ("--lr", "train.lr", "learning rate"),
        ("--degree", "model.degree", "spline degree"),
        ("--grid", "model.grid", "spline grid size"),
    ],
    "pinn": [
        ("--pde", "pde.kind", "heat | poisson"),
        ("--model", "model.kind", "xnet | mlp"),
        ("--width", "model.width", "hidden width (xnet)"),
        ("--shape", "model.shape", "comma layer sizes (mlp)"),
        ("--alpha", "pinn.alpha", "interior loss weight"),
        ("--n-interior", "pinn.n_interior", "interior collocation points"),
        ("--n-boundary", "pinn.n_boundary", "boundary/initial points"),
        ("--nu", "pde.nu", "heat viscosity"),
        ("--steps", "train.steps", "optimizer steps"),
        ("--lr", "train.lr", "learning rate"),
        ("--resolution", "pinn.resolution", "evaluation grid per axis"),
    ],
    "diagnose": [
        ("--sizes", "diag.sizes", "comma matrix sizes"),
        ("--pole-offset", "diag.pole_offset", "pole shift from nodes"),
    ],
    "sweep": [
        ("--target", "task.name", "1-D target name"),
        ("--widths", "sweep.widths", "comma width list"),
        ("--budget", "sweep.budget", "training steps per width"),
        ("--lr", "train.lr", "learning rate"),
        ("--n-train", "task.n_train", "training samples"),
        ("--n-test", "task.n_test", "test samples"),
        ("--degree", "model.degree", "comparator spline degree"),
    ],
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cauchynet",
        description="Cauchy-activation network experiment harness")
    sub = parser.add_subparsers(dest="command", required=True)
    for command, flags in _FLAG_MAP.items():
        p = sub.add_parser(command)
        for flag, key, help_text in flags:
            p.add_argument(flag, dest=key, metavar="V", help=help_text)
        p.add_argument("--config", metavar="PATH", help="config file")
        p.add_argument("--seed", metavar="U64",
                       help="seed, or comma list for multi-seed runs")
        p.add_argument("--out", metavar="DIR", help="output directory")
        p.add_argument("--jobs", metavar="N", help="parallel seed workers")
    return parser


def _run_one(cfg, command: str):
    return run_experiment(cfg, command)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    command = args.command
    try:
        pairs = []
        if args.config:
            path = Path(args.config)
            if not path.exists():
                print(f"error: config file {path} not found", file=sys.stderr)
                return 2
            pairs += parse_kv(path.read_text(), source=str(path))
        for flag, key, _ in _FLAG_MAP[command]:
            value = getattr(args, key)
            if value is not None:
                pairs.append((key, value, f"flag {flag}"))
        if args.out is not None:
            pairs.append(("out", args.out, "flag --out"))
        if args.jobs is not None:
            pairs.append(("jobs", args.jobs, "flag --jobs"))
        seeds = ([int(s) for s in args.seed.split(",")]
                 if args.seed is not None else [None])
        cfg = build_config(pairs)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if len(seeds) == 1:
        if seeds[0] is not None:
            cfg.seed = seeds[0]
        try:
            records = run_experiment(cfg, command)
        except (ConfigError, ExperimentFailed, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        for rec in records:
            print(f"{rec.experiment_id}: mse={rec.mse:.6e} "
                  f"rmse={rec.rmse:.6e} mae={rec.mae:.6e} "
                  f"params={rec.param_count} wall={rec.wall_seconds:.2f}s")
        if not records:
            print(f"{command}: artifacts written to {cfg.out}")
        return 0

    # multi-seed: one subdirectory per seed, merged metrics in seed order
    base_out = Path(cfg.out)
    cfgs = []
    for s in seeds:
        c = dataclasses.replace(cfg)
        c.seed = s
        c.out = str(base_out / f"seed{s}")
        cfgs.append(c)
    failures: list[str] = []
    all_records = []
    jobs = cfg.jobs
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_run_one, c, command) for c in cfgs]
            for c, fut in zip(cfgs, futures):
                try:
                    all_records.extend(fut.result())
                except Exception as exc:
                    failures.append(f"seed {c.seed}: {exc}")
    else:
        for c in cfgs:
            try:
                all_records.extend(_run_one(c, command))
            except Exception as exc:
                failures.append(f"seed {c.seed}: {exc}")
    if all_records:
        base_out.mkdir(parents=True, exist_ok=True)
        (base_out / "metrics.csv").write_text(metrics_to_csv(all_records))
    for rec in all_records:
        print(f"{rec.experiment_id}: mse={rec.mse:.6e} rmse={rec.rmse:.6e} "
              f"mae={rec.mae:.6e}")
    if failures:
        print("failed experiments:", file=sys.stderr)
        for f in failures:
            print(f"  {f}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
