"""Command-line entry point.

Subcommands::

    sparse-sysid example1 --out DIR [--config cfg.json] [--seeds 1,2,3] [--horizon N]
    sparse-sysid example2 --out DIR [--config cfg.json] [--seeds 1,2,3] [--horizon N]
    sparse-sysid diagnose --experiment example1|example2 --out DIR [...]
    sparse-sysid simulate --out DIR [--experiment example1 | --spec spec.json] [--n N] [--seed S]
    sparse-sysid estimate --data dataset.csv --out DIR [--checkpoints ...] [--lambda-kind ...] [--lambda-exponent ...]

Exit code 0 on success; on failure a machine-readable JSON object
``{"error": <type>, "message": <text>}`` goes to stderr and the exit code is
nonzero.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .experiments import (
    DEFAULT_CHECKPOINTS,
    ExperimentConfig,
    default_config,
    diagnose,
    example1_spec,
    offline_checkpoints,
    run_example1,
    run_example2,
)
from .hammerstein import Dataset, HammersteinSpec, simulate_hammerstein
from .schedules import LambdaSchedule


def _parse_int_list(text: str) -> tuple[int, ...]:
    return tuple(int(part) for part in text.split(",") if part.strip())


def _load_config(args: argparse.Namespace, experiment: str) -> ExperimentConfig:
    if args.config:
        config = ExperimentConfig.from_json(Path(args.config).read_text())
        if config.experiment != experiment:
            raise ValueError(
                f"config file is for {config.experiment!r}, expected {experiment!r}"
            )
    else:
        config = default_config(experiment)
    overrides = {}
    if args.seeds:
        overrides["seeds"] = _parse_int_list(args.seeds)
    if args.horizon:
        overrides["horizon"] = args.horizon
        overrides.setdefault(
            "checkpoint_schedule",
            tuple(n for n in config.checkpoint_schedule if n <= args.horizon) or (args.horizon,),
        )
    if overrides:
        config = ExperimentConfig(
            experiment=config.experiment,
            seeds=overrides.get("seeds", config.seeds),
            horizon=overrides.get("horizon", config.horizon),
            checkpoint_schedule=overrides.get("checkpoint_schedule", config.checkpoint_schedule),
            lambda_schedule=config.lambda_schedule,
            ridge_floor=config.ridge_floor,
            solver_tol=config.solver_tol,
            solver_max_iters=config.solver_max_iters,
            weight_cap=config.weight_cap,
            irrepresentable_eta=config.irrepresentable_eta,
            output_dir=config.output_dir,
        )
    return config


def _cmd_example(args: argparse.Namespace, experiment: str) -> int:
    config = _load_config(args, experiment)
    out_dir = args.out or config.output_dir
    if not out_dir:
        raise ValueError("an output directory is required (--out or config.output_dir)")
    runner = run_example1 if experiment == "example1" else run_example2
    summary = runner(config, out_dir)
    print(f"{experiment}: {len(summary.seeds) - len(summary.failed_seeds)}/"
          f"{len(summary.seeds)} seeds succeeded; artifacts in {out_dir}")
    return 0


def _cmd_diagnose(args: argparse.Namespace) -> int:
    config = _load_config(args, args.experiment)
    out_dir = args.out or config.output_dir
    if not out_dir:
        raise ValueError("an output directory is required (--out or config.output_dir)")
    path = diagnose(config, out_dir)
    print(f"diagnostics written to {path}")
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    if args.spec:
        spec = HammersteinSpec.from_dict(json.loads(Path(args.spec).read_text()))
    elif args.experiment == "example1":
        spec = example1_spec()
    else:
        raise ValueError("simulate needs --spec or --experiment example1")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    dataset = simulate_hammerstein(spec, args.n, args.seed)
    dataset.to_csv(out / "dataset.csv")
    (out / "spec.json").write_text(json.dumps(spec.to_dict(), sort_keys=True, indent=2) + "\n")
    (out / "meta.json").write_text(json.dumps(dataset.meta, sort_keys=True, indent=2) + "\n")
    print(f"wrote {len(dataset)} pairs to {out / 'dataset.csv'}")
    return 0


def _cmd_estimate(args: argparse.Namespace) -> int:
    dataset = Dataset.from_csv(args.data)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    checkpoints = _parse_int_list(args.checkpoints) if args.checkpoints else tuple(
        n for n in DEFAULT_CHECKPOINTS if n <= len(dataset)
    )
    if not checkpoints:
        checkpoints = (len(dataset),)
    schedule = LambdaSchedule(args.lambda_kind, args.lambda_exponent)
    records = offline_checkpoints(dataset, checkpoints, schedule)
    lines = ["N,coord_index,ls,modified,sparse,in_support_zero"]
    for record in records:
        if record.estimate is None:
            continue
        bundle = record.estimate.bundle
        for j in range(len(bundle.ls)):
            lines.append(
                f"{record.n},{j + 1},{float(bundle.ls[j])!r},{float(bundle.modified[j])!r},"
                f"{float(bundle.sparse[j])!r},{1 if (j + 1) in bundle.support_zero else 0}"
            )
    (out / "checkpoints.csv").write_text("\n".join(lines) + "\n")
    skipped = [record.n for record in records if record.estimate is None]
    note = f" ({len(skipped)} checkpoint(s) skipped: statistics not ready)" if skipped else ""
    print(f"wrote estimates for {len(records) - len(skipped)} checkpoint(s) to "
          f"{out / 'checkpoints.csv'}{note}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sparse-sysid",
        description="Sparse system identification experiments and tools",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("example1", "example2"):
        p = sub.add_parser(name, help=f"run the {name} Monte Carlo experiment")
        p.add_argument("--config", help="experiment config JSON")
        p.add_argument("--out", help="output directory")
        p.add_argument("--seeds", help="comma-separated seed list")
        p.add_argument("--horizon", type=int, help="observation count per seed")

    p = sub.add_parser("diagnose", help="emit assumption/irrepresentable diagnostics")
    p.add_argument("--experiment", choices=("example1", "example2"), required=True)
    p.add_argument("--config", help="experiment config JSON")
    p.add_argument("--out", help="output directory")
    p.add_argument("--seeds", help="comma-separated seed list")
    p.add_argument("--horizon", type=int)

    p = sub.add_parser("simulate", help="simulate an open-loop dataset to CSV")
    p.add_argument("--out", required=True)
    p.add_argument("--experiment", choices=("example1",))
    p.add_argument("--spec", help="system spec JSON")
    p.add_argument("--n", type=int, default=3000)
    p.add_argument("--seed", type=int, default=1)

    p = sub.add_parser("estimate", help="run the estimation pipeline over a dataset CSV")
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--checkpoints", help="comma-separated checkpoint sample counts")
    p.add_argument("--lambda-kind", default="power_of_n",
                   choices=("power_of_n", "power_of_lambda_min"))
    p.add_argument("--lambda-exponent", type=float, default=0.75)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command in ("example1", "example2"):
            return _cmd_example(args, args.command)
        if args.command == "diagnose":
            return _cmd_diagnose(args)
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "estimate":
            return _cmd_estimate(args)
        raise ValueError(f"unknown command {args.command!r}")
    except Exception as err:  # noqa: BLE001 - CLI boundary reports all failures
        print(json.dumps({"error": type(err).__name__, "message": str(err)}),
              file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
