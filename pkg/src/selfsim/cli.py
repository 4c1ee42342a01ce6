"""CLI entry point for selfsim."""

from __future__ import annotations

import argparse
import asyncio
import logging
import os
import sys
from collections.abc import Sequence
from pathlib import Path

from dotenv import dotenv_values, load_dotenv
from pydantic import ValidationError

from heleshaw import (
    EpsilonParams,
    EpsilonRejected,
    build_profile,
    profile_summary,
    response_exponent,
)
from protocol import SolverConfig, SweepRecord
from realline import Grid
from verify import format_table
from workflow import NodeRecord, WorkflowRunner

from .artifacts import (
    DIAGNOSTICS_FILE,
    FIELD_FILE,
    GPROFILE_FILE,
    PLOT_FILE,
    PROFILE_TABLE_FILE,
    read_run,
    run_dir_name,
    sweep_entry,
    write_profile_table,
    write_run,
    write_sweep,
)
from .pipeline import (
    BuildProfile,
    RunDeps,
    RunState,
    create_solve_pipeline,
    execute_run,
    stop_run,
)
from .plotting import plot_interface

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECKS_FAILED = 1
EXIT_NO_CONVERGENCE = 2
EXIT_CONFIG = 3

STATUS_EXIT = {
    "converged": EXIT_OK,
    "checks_failed": EXIT_CHECKS_FAILED,
    "failed": EXIT_CHECKS_FAILED,
    "no_convergence": EXIT_NO_CONVERGENCE,
    "contraction_failure": EXIT_NO_CONVERGENCE,
    "rejected": EXIT_CONFIG,
}

# flag dest -> SolverConfig field
CONFIG_FLAGS = (
    "epsilon",
    "n_points",
    "half_width",
    "pad_factor",
    "delta",
    "tol",
    "tol_rel",
    "max_iter",
    "relaxation",
    "output_dir",
    "times",
    "seed",
    "epsilon_cap",
    "smallness_cap",
    "consistency_tol",
    "solve_method",
)


class ConfigError(ValueError):
    """Invalid command line, config file or environment."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise ConfigError(f"{self.prog}: {message}")


def _config_options() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", type=Path, help="key=value config file")
    common.add_argument("--epsilon", type=float)
    common.add_argument("--n", "--n-points", dest="n_points", type=int)
    common.add_argument("--half-width", type=float)
    common.add_argument("--pad-factor", type=int)
    common.add_argument("--delta", type=float)
    common.add_argument("--tol", type=float)
    common.add_argument("--tol-rel", type=float)
    common.add_argument("--max-iter", type=int)
    common.add_argument("--relaxation", type=float)
    common.add_argument("--output-dir")
    common.add_argument("--times", type=float, nargs="+")
    common.add_argument("--seed", type=int)
    common.add_argument("--epsilon-cap", type=float)
    common.add_argument("--smallness-cap", type=float)
    common.add_argument("--consistency-tol", type=float)
    common.add_argument("--solve-method", choices=["lu", "gmres"])
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true")
    verbosity.add_argument("-q", "--quiet", action="store_true")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _config_options()
    parser = _Parser(
        prog="selfsim",
        description="Self-similar Hele-Shaw corner profiles.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    gprofile = commands.add_parser(
        "gprofile", parents=[common], help="build G and write gprofile.json"
    )
    gprofile.add_argument("--run-dir", type=Path)

    solve = commands.add_parser(
        "solve", parents=[common], help="solve one epsilon"
    )
    solve.add_argument("--run-dir", type=Path)
    solve.add_argument(
        "--plot", action=argparse.BooleanOptionalAction, default=True
    )
    solve.add_argument("--verify", action="store_true")

    sweep = commands.add_parser(
        "sweep", parents=[common], help="solve several epsilons concurrently"
    )
    sweep.add_argument("--epsilons", type=float, nargs="*", required=True)
    sweep.add_argument("--jobs", type=int, help="concurrent runs")

    reconstruct = commands.add_parser(
        "reconstruct",
        parents=[common],
        help="rebuild the interface from a saved v.csv",
    )
    reconstruct.add_argument("--run-dir", type=Path, required=True)
    reconstruct.add_argument(
        "--plot", action=argparse.BooleanOptionalAction, default=True
    )

    verify = commands.add_parser(
        "verify", parents=[common], help="solve and run the check suite"
    )
    verify.add_argument("--run-dir", type=Path)
    verify.add_argument("--refine", action="store_true")
    verify.add_argument("--jobs", type=int, help="concurrent check groups")
    return parser


def configure_logging(args: argparse.Namespace) -> None:
    """--verbose/--quiet win over SELFSIM_LOG_LEVEL."""
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.WARNING
    else:
        name = os.getenv("SELFSIM_LOG_LEVEL", "INFO").upper()
        level = logging.getLevelName(name)
        if not isinstance(level, int):
            raise ConfigError(f"SELFSIM_LOG_LEVEL: unknown level {name!r}")
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    logging.getLogger().setLevel(level)


def read_config_file(path: Path) -> dict[str, object]:
    """Parse a flat key=value file; ``times`` is comma separated."""
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    values: dict[str, object] = {}
    for key, raw in dotenv_values(path).items():
        if raw is None:
            raise ConfigError(f"{path}: {key} has no value")
        key = key.strip().lower()
        if key == "times":
            values[key] = [t for t in raw.split(",") if t.strip()]
        else:
            values[key] = raw
    return values


def load_config(
    args: argparse.Namespace, base: SolverConfig | None = None
) -> SolverConfig:
    """Defaults (or ``base``) < config file < environment < flags.

    Raises:
        ConfigError: If any layer holds an unknown key or invalid value.
    """
    values: dict[str, object] = base.model_dump() if base else {}
    if args.config is not None:
        values.update(read_config_file(args.config))
    output_dir = os.getenv("SELFSIM_OUTPUT_DIR")
    if output_dir:
        values["output_dir"] = output_dir
    for name in CONFIG_FLAGS:
        value = getattr(args, name, None)
        if value is not None:
            values[name] = value
    try:
        return SolverConfig.model_validate(values)
    except ValidationError as exc:
        raise ConfigError(str(exc)) from exc


def _single_run_dir(args: argparse.Namespace, cfg: SolverConfig) -> Path:
    if getattr(args, "run_dir", None) is not None:
        return args.run_dir
    return Path(cfg.output_dir) / run_dir_name(cfg.epsilon)


def _summary(state: RunState, run_dir: Path) -> str:
    line = f"{state.status} eps={state.config.epsilon:g}"
    if state.iteration is not None:
        line += f" steps={state.iteration.n_steps}"
    if state.solution is not None:
        line += f" xnorm={state.solution.xnorm:.3e}"
    if state.error is not None:
        line += f" error={state.error.type}"
    return f"{line} dir={run_dir}"


def _finish(
    state: RunState,
    history: list[NodeRecord],
    run_dir: Path,
    plot: bool = False,
) -> int:
    write_run(run_dir, state, history)
    if plot and state.interface is not None:
        plot_interface(
            state.interface, state.config.times, run_dir / PLOT_FILE
        )
    print(_summary(state, run_dir))
    return STATUS_EXIT[state.status]


def cmd_gprofile(args: argparse.Namespace) -> int:
    cfg = load_config(args)
    run_dir = _single_run_dir(args, cfg)
    try:
        gp = build_profile(
            EpsilonParams(cfg.epsilon),
            Grid(cfg.half_width, cfg.n_points, cfg.pad_factor),
            cfg.epsilon_cap,
        )
    except EpsilonRejected as exc:
        raise ConfigError(str(exc)) from exc
    run_dir.mkdir(parents=True, exist_ok=True)
    summary = profile_summary(gp)
    (run_dir / GPROFILE_FILE).write_text(summary.to_json())
    write_profile_table(gp, run_dir / PROFILE_TABLE_FILE)
    print(
        f"gprofile eps={cfg.epsilon:g} integral_Gx={summary.integral_Gx:.12f} "
        f"dir={run_dir}"
    )
    return EXIT_OK


def cmd_solve(args: argparse.Namespace) -> int:
    cfg = load_config(args)
    deps = RunDeps(verify=args.verify)
    state, history = asyncio.run(execute_run(cfg, deps))
    if state.checks is not None:
        print(format_table(state.checks))
    return _finish(state, history, _single_run_dir(args, cfg), args.plot)


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = load_config(args)
    if not args.epsilons:
        raise ConfigError("sweep needs at least one epsilon")
    epsilons = list(dict.fromkeys(args.epsilons))
    if len(epsilons) < len(args.epsilons):
        logger.warning(
            "duplicate epsilons dropped: %d of %d kept",
            len(epsilons),
            len(args.epsilons),
        )
    states = [
        RunState(config=cfg.model_copy(update={"epsilon": eps}))
        for eps in epsilons
    ]

    runner = WorkflowRunner(max_parallel=args.jobs)
    results = asyncio.run(
        runner.run_many(
            create_solve_pipeline(), BuildProfile(), states, RunDeps()
        )
    )

    output_dir = Path(cfg.output_dir)
    entries = []
    codes = []
    for state, result in zip(states, results):
        history: list[NodeRecord] = []
        if isinstance(result, Exception):
            stop_run(state, "failed", result)
        else:
            history = result.history
        run_dir = output_dir / run_dir_name(state.config.epsilon)
        codes.append(_finish(state, history, run_dir))
        entries.append(sweep_entry(state, run_dir))

    converged = [e for e in entries if e.xnorm is not None]
    record = SweepRecord(
        entries=entries,
        response_exponent=response_exponent(
            [e.epsilon for e in converged], [e.xnorm for e in converged]
        ),
    )
    path = write_sweep(output_dir, record)
    exponent = record.response_exponent
    print(
        f"sweep runs={len(entries)} converged={codes.count(EXIT_OK)} "
        f"exponent={'-' if exponent is None else f'{exponent:.4f}'} "
        f"file={path}"
    )
    return max(codes)


def _saved_config(args: argparse.Namespace) -> SolverConfig:
    """Config stored in --run-dir/run.json, overridden by the usual layers."""
    try:
        record = read_run(args.run_dir)
    except FileNotFoundError as exc:
        raise ConfigError(f"{args.run_dir}: no run.json") from exc
    except ValidationError as exc:
        raise ConfigError(f"{args.run_dir}: corrupted run.json") from exc
    return load_config(args, base=record.config)


def cmd_reconstruct(args: argparse.Namespace) -> int:
    cfg = _saved_config(args)
    iterate = args.run_dir / FIELD_FILE
    if not iterate.is_file():
        raise ConfigError(f"{args.run_dir}: no {FIELD_FILE}")
    state, history = asyncio.run(
        execute_run(cfg, RunDeps(iterate_path=iterate))
    )
    if state.diagnostics is not None:
        (args.run_dir / DIAGNOSTICS_FILE).write_text(
            state.diagnostics.to_json()
        )
    if args.plot and state.interface is not None:
        plot_interface(state.interface, cfg.times, args.run_dir / PLOT_FILE)
    print(_summary(state, args.run_dir))
    return STATUS_EXIT[state.status]


def cmd_verify(args: argparse.Namespace) -> int:
    if args.run_dir is not None:
        cfg = _saved_config(args)
    else:
        cfg = load_config(args)
    deps = RunDeps(verify=True, refine=args.refine, max_parallel=args.jobs)
    state, history = asyncio.run(execute_run(cfg, deps))
    if state.checks is not None:
        print(format_table(state.checks))
    return _finish(state, history, _single_run_dir(args, cfg))


COMMANDS = {
    "gprofile": cmd_gprofile,
    "solve": cmd_solve,
    "sweep": cmd_sweep,
    "reconstruct": cmd_reconstruct,
    "verify": cmd_verify,
}


def main(argv: Sequence[str] | None = None) -> int:
    """Main entry point for selfsim CLI."""
    # Load environment variables from .env file
    load_dotenv()

    try:
        args = build_parser().parse_args(argv)
        configure_logging(args)
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"selfsim: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
