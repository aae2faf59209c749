"""Command-line interface: ``momentlab <command> [options]``."""

from __future__ import annotations

import argparse
import logging
import sys
import typing
from collections.abc import Sequence

from .exceptions import CheckFailedError, ConfigError, MomentLabError
from .experiments import default_lab
from .schemas import COMMANDS, FORMATS, dump_config, load_config
from .stats import PREFACTOR_MODES
from .utils import version_string
from .yaml_utils import dict_to_yaml, load_config_file

logger = logging.getLogger("momentlab")

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_ERROR = 4


def parse_n_list(values: Sequence[str]) -> list[int]:
    """Parse ``--n 50,200 800`` into [50, 200, 800]."""
    orders = []
    for value in values:
        for part in value.replace(",", " ").split():
            try:
                orders.append(int(part))
            except ValueError as err:
                raise argparse.ArgumentTypeError(f"not an integer: {part!r}") from err
    return orders


def _seed(value: str) -> int:
    try:
        return int(value, 0)
    except ValueError as err:
        raise argparse.ArgumentTypeError(f"not an integer seed: {value!r}") from err


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="momentlab",
        description="Random moments, random orthogonal polynomials and their roots.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--version", action="version", version=f"%(prog)s {version_string()}")
    parser.add_argument("--n", dest="n_list", nargs="+", help="Ensemble orders, comma or space separated.")
    parser.add_argument("--m", type=int, help="Number of roots (clt-roots).")
    parser.add_argument("--k", type=int, help="Number of moments (clt-moments).")
    parser.add_argument("--reps", dest="replicates", type=int, help="Replicates per order.")
    parser.add_argument("--seed", type=_seed, help="Base seed; accepts 0x prefixes.")
    parser.add_argument("--out", help="Output file; stdout when omitted.")
    parser.add_argument("--format", choices=FORMATS, help="Output format (default: csv).")
    parser.add_argument("--jobs", type=int, help="Worker processes (default: 1).")
    parser.add_argument("--prefactor-mode", choices=PREFACTOR_MODES, help="Covariance prefactor of clt-roots.")
    parser.add_argument("--config", help="YAML configuration file or JSON sidecar of a previous run.")
    parser.add_argument(
        "--dump-config",
        action="store_true",
        help="Print the resolved configuration as YAML and exit.",
    )
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="count", default=0)
    verbosity.add_argument("-q", "--quiet", action="store_true")
    return parser


def configure_logging(verbose: int, quiet: bool) -> None:
    """Send package logs to stderr: INFO by default, DEBUG with ``-v`` and
    WARNING with ``-q``."""
    if quiet:
        level = logging.WARNING
    elif verbose:
        level = logging.DEBUG
    else:
        level = logging.INFO
    logger.setLevel(level)
    logging.basicConfig(
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    logging.captureWarnings(True)


def resolve_config(args: argparse.Namespace) -> dict[str, typing.Any]:
    """Merge configuration sources; flags override the file, which overrides
    the per-command defaults."""
    data: dict[str, typing.Any] = {}
    if args.config:
        data.update(load_config_file(args.config))
    flags = {
        "n_list": parse_n_list(args.n_list) if args.n_list else None,
        "m": args.m,
        "k": args.k,
        "replicates": args.replicates,
        "seed": args.seed,
        "out": args.out,
        "format": args.format,
        "jobs": args.jobs,
        "prefactor_mode": args.prefactor_mode,
    }
    data.update({key: value for key, value in flags.items() if value is not None})
    data["command"] = args.command
    return data


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return err.code if isinstance(err.code, int) else EXIT_USAGE
    configure_logging(args.verbose, args.quiet)
    try:
        config = load_config(resolve_config(args))
        if args.dump_config:
            sys.stdout.write(dict_to_yaml(dump_config(config)))
            return EXIT_OK
        report = default_lab().run(config)
        if config.out is None:
            sys.stdout.write(report.render(config.format))
        else:
            for path in report.write(config.out, config.format):
                logger.info("wrote %s", path)
        report.raise_on_failure()
    except argparse.ArgumentTypeError as err:
        logger.error("%s", err)
        return EXIT_USAGE
    except ConfigError as err:
        logger.error("%s", err)
        return EXIT_USAGE
    except CheckFailedError as err:
        logger.error("%s", err)
        return EXIT_CHECK_FAILED
    except MomentLabError as err:
        logger.error("%s: %s", type(err).__name__, err)
        return EXIT_ERROR
    except OSError as err:
        logger.error("%s", err)
        return EXIT_IO
    return EXIT_OK
