"""Command line interface: ``momax gen|run|ablate|summarize``."""
import argparse
import logging
import os
import sys
from typing import List, Optional

import numpy as np

from .bench import format_summary, load_config, read_rows, summarize
from .bench.runner import ablation, default_ablation_config, run_experiment
from .const import (
    AXIS_PHI,
    AXIS_REPETITIONS,
    CONF_ALGORITHMS,
    CONF_BUDGETS,
    CONF_OUT,
    CONF_SEEDS,
    CONF_TIME_LIMIT,
    CONF_WORKERS,
    DEFAULT_BA_D,
    DEFAULT_COLORS,
    DEFAULT_ER_P,
    DEFAULT_KRONECKER_POWER,
    DEFAULT_NODES,
    EXIT_CONFIG_ERROR,
    EXIT_INSTANCE_ERROR,
    EXIT_OK,
    EXIT_TIME_LIMIT,
    FAMILIES,
    FAMILY_KRONECKER,
    PHI_SWEEP,
    REPETITION_SWEEP,
)
from .exceptions import ConfigError, InputError, InstanceError
from .generators import GeneratorSpec, gen_hard_schedule
from .objectives import write_edge_list

_LOGGER = logging.getLogger(__name__)


def _int_list(text: str) -> List[int]:
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text}") from exc


def _float_list(text: str) -> List[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers: {text}") from exc


def _str_list(text: str) -> List[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def _add_overrides(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=_int_list, help="seeds, comma-separated")
    parser.add_argument("--budget-list", type=_int_list, help="budgets, comma-separated")
    parser.add_argument("--algorithms", type=_str_list, help="algorithms, comma-separated")
    parser.add_argument("--time-limit-s", type=float, help="time limit per run")
    parser.add_argument("--workers", type=int, help="parallel cells")
    parser.add_argument("--out", help="results CSV")


def _overrides(args) -> dict:
    return {
        CONF_SEEDS: args.seed,
        CONF_BUDGETS: args.budget_list,
        CONF_ALGORITHMS: args.algorithms,
        CONF_TIME_LIMIT: args.time_limit_s,
        CONF_WORKERS: args.workers,
        CONF_OUT: args.out,
    }


def build_parser() -> argparse.ArgumentParser:
    """Argument parser of every subcommand."""
    parser = argparse.ArgumentParser(
        prog="momax", description="Multiobjective submodular maximization experiments."
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    commands = parser.add_subparsers(dest="command", required=True)

    gen = commands.add_parser("gen", help="write random graphs as edge lists")
    gen.add_argument("--family", choices=FAMILIES, default=FAMILY_KRONECKER)
    gen.add_argument("--nodes", type=int, default=DEFAULT_NODES)
    gen.add_argument("--colors", type=int, default=DEFAULT_COLORS)
    gen.add_argument("--p", type=float, default=DEFAULT_ER_P)
    gen.add_argument("--d", type=int, default=DEFAULT_BA_D)
    gen.add_argument("--power", type=int, default=DEFAULT_KRONECKER_POWER)
    gen.add_argument("--hard", action="store_true", help="per-color parameter schedule")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out-dir", default=".")

    run = commands.add_parser("run", help="run an experiment configuration")
    run.add_argument("--config", required=True)
    _add_overrides(run)

    ablate = commands.add_parser("ablate", help="sweep repetitions or phi of LP greedy")
    ablate.add_argument("--axis", choices=(AXIS_REPETITIONS, AXIS_PHI), required=True)
    ablate.add_argument("--values", type=_float_list, help="axis values, comma-separated")
    ablate.add_argument("--config", help="instance and sweep configuration")
    _add_overrides(ablate)

    summary = commands.add_parser("summarize", help="mean and std per algorithm and budget")
    summary.add_argument("csv")
    return parser


def _gen(args) -> int:
    nodes = 2 ** args.power if args.family == FAMILY_KRONECKER else args.nodes
    base = GeneratorSpec(
        family=args.family, n=nodes, p=args.p, d=args.d, power=args.power
    )
    specs = gen_hard_schedule(args.family, args.colors, base) if args.hard else [base] * args.colors
    children = np.random.SeedSequence(args.seed).spawn(args.colors)
    os.makedirs(args.out_dir, exist_ok=True)
    for c, (spec, child) in enumerate(zip(specs, children)):
        path = os.path.join(args.out_dir, f"color_{c}.txt")
        write_edge_list(spec.generate(np.random.default_rng(child)), path)
        print(path)
    return EXIT_OK


def _report(rows) -> int:
    timeouts = [row for row in rows if row.timed_out]
    if timeouts:
        _LOGGER.warning("%d of %d runs exceeded their time limit", len(timeouts), len(rows))
        return EXIT_TIME_LIMIT
    return EXIT_OK


def _run(args) -> int:
    cfg = load_config(args.config, **_overrides(args))
    return _report(run_experiment(cfg))


def _ablate(args) -> int:
    if args.config:
        cfg = load_config(args.config, **_overrides(args))
    else:
        cfg = default_ablation_config(**_overrides(args))
    default = REPETITION_SWEEP if args.axis == AXIS_REPETITIONS else PHI_SWEEP
    return _report(ablation(cfg, args.axis, args.values or default))


def _summarize(args) -> int:
    print(format_summary(summarize(read_rows(args.csv))))
    return EXIT_OK


COMMANDS = {"gen": _gen, "run": _run, "ablate": _ablate, "summarize": _summarize}


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, InputError) as exc:
        _LOGGER.error("%s", exc)
        return EXIT_CONFIG_ERROR
    except InstanceError as exc:
        _LOGGER.error("%s", exc)
        return EXIT_INSTANCE_ERROR


if __name__ == "__main__":
    sys.exit(main())
