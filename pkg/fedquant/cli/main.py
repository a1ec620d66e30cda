# fedquant/cli/main.py

"""
Entry point da CLI ``fedquant``

Subcomandos: run, sweep, analysis, replay, partition.
Códigos de saída: 0 ok, 1 erro de execução/dados, 2 erro de uso, 3 erro de IO.
"""

import argparse
import json
import sys
from typing import Any, Dict, List, Optional

from fedquant.__version__ import __version__
from fedquant.cli.runner import (
    DEFAULT_TEST_FRACTION,
    STUDIES,
    SWEEP_AXES,
    dataset_descriptor,
    load_datasets,
    replay,
    run_analysis,
    run_experiment,
    run_partition,
    run_sweep,
)
from fedquant.exceptions import FedQuantError, UsageError
from fedquant.models import FederatedConfig, default_config_dict
from fedquant.optim import OptimizerMode
from fedquant.utils import get_logger, setup_logging
from fedquant.utils.config import load_config_file, merge_config
from fedquant.utils.parser import parse_alpha, parse_dataset_spec, parse_int_list

logger = get_logger('cli')

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_IO = 3

# flag (dest do argparse) -> campo de FederatedConfig
CONFIG_FLAGS = {
    "mode": "mode",
    "alpha": "alpha",
    "clients": "num_clients",
    "per_round": "clients_per_round",
    "rounds": "rounds",
    "epochs": "local_epochs",
    "batch": "batch_size",
    "lr": "lr",
    "beta1": "beta1",
    "beta2": "beta2",
    "eps": "eps",
    "block_size": "block_size",
    "seed": "seed",
    "hidden": "hidden",
}


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--log-level", default="INFO", help="DEBUG, INFO, WARNING, ERROR")
    common.add_argument("--log-file", default=None, help="Also log to this file")
    return common


def _config_parser() -> argparse.ArgumentParser:
    """Flags de configuração; None significa 'não informado' na mesclagem"""
    cfg = argparse.ArgumentParser(add_help=False)
    group = cfg.add_argument_group("federated config")
    group.add_argument("--config", default=None, help="YAML or JSON config file")
    group.add_argument("--mode", choices=[m.value for m in OptimizerMode], default=None)
    group.add_argument("--alpha", default=None, help="Dirichlet concentration or 'iid'")
    group.add_argument("--clients", type=int, default=None)
    group.add_argument("--per-round", type=int, default=None)
    group.add_argument("--rounds", type=int, default=None)
    group.add_argument("--epochs", type=int, default=None)
    group.add_argument("--batch", type=int, default=None)
    group.add_argument("--lr", type=float, default=None)
    group.add_argument("--beta1", type=float, default=None)
    group.add_argument("--beta2", type=float, default=None)
    group.add_argument("--eps", type=float, default=None)
    group.add_argument("--block-size", type=int, default=None)
    group.add_argument("--seed", type=int, default=None)
    group.add_argument("--hidden", type=parse_int_list, default=None, help="e.g. 128,64")

    data = cfg.add_argument_group("dataset")
    data.add_argument("--dataset", default="synthetic", help="'synthetic' or 'file:<path>'")
    data.add_argument("--test-data", default=None, help="Separate test file for file datasets")
    data.add_argument("--test-fraction", type=float, default=DEFAULT_TEST_FRACTION)
    data.add_argument("--n-train", type=int, default=None)
    data.add_argument("--n-test", type=int, default=None)
    data.add_argument("--features", type=int, default=None)
    data.add_argument("--classes", type=int, default=None)
    data.add_argument("--class-sep", type=float, default=None)

    cfg.add_argument("--threads", type=int, default=1, help="Worker threads per round")
    return cfg


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    config = _config_parser()

    parser = argparse.ArgumentParser(
        prog="fedquant",
        description="8-bit Adam state quantization in a federated learning simulator",
    )
    parser.add_argument("--version", action="version", version=f"fedquant {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    run = sub.add_parser("run", parents=[common, config], help="Run one federated experiment")
    run.add_argument("--out", default="runs/latest", help="Output directory")

    sweep = sub.add_parser("sweep", parents=[common, config], help="One run per axis value")
    sweep.add_argument("--axis", required=True, choices=SWEEP_AXES)
    sweep.add_argument("--values", required=True, help="Comma-separated axis values")
    sweep.add_argument("--seeds", type=parse_int_list, default=None,
                       help="Repeat each value over these seeds (mean ± std)")
    sweep.add_argument("--out", default="runs/sweep")

    analysis = sub.add_parser("analysis", parents=[common], help="Standalone studies")
    analysis.add_argument("study", help=f"One of: {', '.join(STUDIES)}")
    analysis.add_argument("--n", type=int, default=None)
    analysis.add_argument("--lo", type=float, default=None)
    analysis.add_argument("--hi", type=float, default=None)
    analysis.add_argument("--block-size", type=int, default=None)
    analysis.add_argument("--seed", type=int, default=None)
    analysis.add_argument("--rounding", choices=["floor", "nearest"], default=None)
    analysis.add_argument("--params", type=parse_int_list, default=None,
                          help="Parameter counts for scaling, e.g. 10e6,100e6")
    analysis.add_argument("--steps", type=int, default=None, help="Warmup steps for histograms")
    analysis.add_argument("--batch", type=int, default=None)
    analysis.add_argument("--mode", choices=[m.value for m in OptimizerMode], default=None)
    analysis.add_argument("--out", default="runs/analysis")

    rep = sub.add_parser("replay", parents=[common], help="Re-run from a manifest and compare")
    rep.add_argument("manifest")
    rep.add_argument("--out", default=None)
    rep.add_argument("--threads", type=int, default=1)

    part = sub.add_parser("partition", parents=[common, config], help="Heterogeneity table")
    part.add_argument("--alphas", default="0.1,0.5,1.0,iid", help="Comma-separated alphas")
    part.add_argument("--out", default="runs/partition")

    return parser


# ==== Resolução de configuração ====

def resolve_config(args: argparse.Namespace) -> FederatedConfig:
    """Flags > arquivo de configuração > padrões"""
    if getattr(args, "threads", 1) < 1:
        raise UsageError(f"--threads must be >= 1, got {args.threads}")
    file_values = load_config_file(args.config) if args.config else {}
    flags = {field: getattr(args, dest) for dest, field in CONFIG_FLAGS.items()}
    return FederatedConfig.from_dict(merge_config(default_config_dict(), file_values, flags))


def resolve_dataset(args: argparse.Namespace, seed: int) -> Dict[str, Any]:
    try:
        kind, path = parse_dataset_spec(args.dataset)
    except ValueError as e:
        raise UsageError(str(e))
    if kind == "file":
        return dataset_descriptor("file", seed, path, args.test_data, args.test_fraction)
    return dataset_descriptor(
        "synthetic", seed,
        n_train=args.n_train, n_test=args.n_test, features=args.features,
        classes=args.classes, class_sep=args.class_sep,
    )


# ==== Comandos ====

def cmd_run(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    result = run_experiment(config, resolve_dataset(args, config.seed), args.out, threads=args.threads)
    print(json.dumps(result.summary(), indent=2))
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    rows = run_sweep(
        config,
        args.axis,
        args.values.split(","),
        resolve_dataset(args, config.seed),
        args.out,
        seeds=args.seeds,
        threads=args.threads,
    )
    print("value\tmode\tbest_acc\tfinal_acc\tstate_bytes\tratio")
    for row in rows:
        print(
            f"{row['value']}\t{row['mode']}\t"
            f"{100 * row['best_accuracy_mean']:.2f}±{100 * row['best_accuracy_std']:.2f}\t"
            f"{100 * row['final_accuracy_mean']:.2f}±{100 * row['final_accuracy_std']:.2f}\t"
            f"{row['state_bytes']}\t{row['compression_ratio']:.3f}"
        )
    return EXIT_OK


def cmd_analysis(args: argparse.Namespace) -> int:
    params = {
        "n": args.n,
        "lo": args.lo,
        "hi": args.hi,
        "block_size": args.block_size,
        "seed": args.seed,
        "rounding": args.rounding,
        "params": args.params,
        "steps": args.steps,
        "batch_size": args.batch,
        "mode": args.mode,
    }
    for path in run_analysis(args.study, params, args.out):
        print(path)
    return EXIT_OK


def cmd_replay(args: argparse.Namespace) -> int:
    outcome = replay(args.manifest, args.out, threads=args.threads)
    print(f"{'identical' if outcome.identical else 'DIFFERENT'}\t{outcome.original}\t{outcome.replayed}")
    return EXIT_OK if outcome.identical else EXIT_FAILURE


def cmd_partition(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    try:
        alphas = [parse_alpha(a) for a in args.alphas.split(",") if a.strip()]
    except ValueError as e:
        raise UsageError(f"Invalid alpha list {args.alphas!r}: {e}")
    if not alphas:
        raise UsageError("--alphas needs at least one value")

    train, _ = load_datasets(resolve_dataset(args, config.seed))
    run_partition(
        train, alphas, config.num_clients, config.seed, args.out,
        clients_per_round=config.clients_per_round, rounds=config.rounds,
    )
    with open(f"{args.out}/partition.tsv", "r", encoding="utf-8") as f:
        sys.stdout.write(f.read())
    return EXIT_OK


COMMANDS = {
    "run": cmd_run,
    "sweep": cmd_sweep,
    "analysis": cmd_analysis,
    "replay": cmd_replay,
    "partition": cmd_partition,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        setup_logging(level=args.log_level, log_file=args.log_file)
    except ValueError as e:
        parser.error(str(e))

    try:
        return COMMANDS[args.command](args)
    except UsageError as e:
        logger.error(f"❌ {e}")
        return EXIT_USAGE
    except OSError as e:
        logger.error(f"❌ I/O error: {e}")
        return EXIT_IO
    except FedQuantError as e:
        logger.error(f"❌ {e}")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
