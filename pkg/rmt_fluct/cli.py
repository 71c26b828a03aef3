"""Command line entry point."""

from __future__ import annotations

import argparse
import logging
from typing import TYPE_CHECKING, Final, NoReturn

from .config import build_config, load_config
from .const import (
    CONF_DEFAULT,
    CONF_EXPERIMENT,
    CONF_LOGS,
    DOMAIN,
    EXPERIMENT_LIMIT_VAR,
    EXPERIMENTS,
    FAMILIES,
    FAMILY_GUE,
    LIMIT_METHODS,
    LOG_LEVELS,
    LOGGER,
    METHOD_QUADRATURE,
    TITLE,
)
from .exceptions import (
    ConfigError,
    ConvergenceError,
    InvalidInputError,
    NumericalError,
)
from .experiments import run_experiment
from .functions import get_function
from .limitvar import LimitVarianceRequest, limit_variance

if TYPE_CHECKING:
    from collections.abc import Sequence

    from .config import ExperimentConfig

EXIT_OK: Final = 0
EXIT_CONFIG: Final = 2
EXIT_NUMERICAL: Final = 3
LOG_FORMAT: Final = "%(asctime)s %(levelname)s %(name)s: %(message)s"


class _ArgumentParser(argparse.ArgumentParser):
    """Report usage errors as configuration errors instead of exiting."""

    def error(self, message: str) -> NoReturn:
        raise ConfigError(message)


def _parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog=DOMAIN, description=TITLE)
    commands = parser.add_subparsers(dest="command", required=True)
    for name in EXPERIMENTS:
        command = commands.add_parser(name)
        command.add_argument("--config", help="YAML experiment file")
        command.add_argument("--seed", type=int)
        command.add_argument("--trials", type=int)
        command.add_argument("--out", help="output directory")
        command.add_argument("--log-level", choices=LOG_LEVELS)
        if name == EXPERIMENT_LIMIT_VAR:
            command.add_argument("--fn", help="print the value for one corpus label")
            command.add_argument("--family", choices=FAMILIES, default=FAMILY_GUE)
            command.add_argument("--method", choices=LIMIT_METHODS, default=METHOD_QUADRATURE)
    return parser


def _configure_logging(default: str, logs: dict[str, str] | None = None) -> None:
    logging.basicConfig(format=LOG_FORMAT)
    logging.getLogger().setLevel(default.upper())
    LOGGER.setLevel(default.upper())
    for name, level in (logs or {}).items():
        logging.getLogger(name).setLevel(level.upper())


def _config(args: argparse.Namespace) -> ExperimentConfig:
    if args.config:
        config = load_config(args.config, args.command)
    else:
        config = build_config({CONF_EXPERIMENT: args.command})
    return config.with_overrides(seed=args.seed, trials=args.trials, output_dir=args.out)


def _print_limit_variance(args: argparse.Namespace) -> None:
    value = limit_variance(
        LimitVarianceRequest(get_function(args.fn), args.family, method=args.method)
    )
    print(repr(round(value, 10)))  # noqa: T201


def run_cli(argv: Sequence[str] | None = None) -> int:
    """Run one subcommand and return its exit code."""
    try:
        args = _parser().parse_args(argv)
        _configure_logging(args.log_level or "warning")
        if args.command == EXPERIMENT_LIMIT_VAR and args.fn:
            _print_limit_variance(args)
            return EXIT_OK
        config = _config(args)
        if args.log_level is None:
            _configure_logging(config.logger[CONF_DEFAULT], config.logger[CONF_LOGS])
        run_experiment(config)
    except (ConfigError, InvalidInputError) as ex:
        LOGGER.error("%s", ex)  # noqa: TRY400
        return EXIT_CONFIG
    except (ConvergenceError, NumericalError) as ex:
        LOGGER.error("Numerical failure: %s", ex)  # noqa: TRY400
        return EXIT_NUMERICAL
    return EXIT_OK


def main() -> None:
    raise SystemExit(run_cli())
