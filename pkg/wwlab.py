"""
Command-line entry point of the Wiener-Wintner laboratory.

    wwlab list
    wwlab describe <scenario>
    wwlab run <config.toml | scenario> [--output DIR] [--quiet]

Exit codes: 0 success, 1 a scenario failed its check, 2 configuration
error, 3 a resource cap was hit.
"""

import argparse
import logging
import sys
from pathlib import Path

from wwlab_core import ConfigError, ResourceError, WWLabError, __version__
from wwlab_scenarios import (
    SCENARIOS,
    default_config,
    describe,
    load_config,
    run_scenario,
    workers_from_env,
)

logger = logging.getLogger("wwlab")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2
EXIT_RESOURCE = 3


def build_parser():
    parser = argparse.ArgumentParser(
        prog="wwlab",
        description="Finite-scale experiments on Wiener-Wintner averages, weight classes and mixing.",
    )
    parser.add_argument("--version", action="version", version=f"wwlab {__version__}")
    parser.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="logging level of the library modules",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="list the registered scenarios")

    p_describe = sub.add_parser("describe", help="show the claim a scenario checks")
    p_describe.add_argument("scenario")

    p_run = sub.add_parser("run", help="run a scenario from a TOML config or by name")
    p_run.add_argument("target", help="path to a .toml config, or a registered scenario name")
    p_run.add_argument("--output", default=None, help="result directory (overrides the config)")
    p_run.add_argument("--quiet", action="store_true", help="suppress progress output")
    return parser


def _load_target(target):
    path = Path(target)
    if path.suffix == ".toml" or path.is_file():
        return load_config(path)
    config = default_config(target)
    return config, None


def cmd_list(args):
    width = max(len(name) for name in SCENARIOS)
    for name, scenario in SCENARIOS.items():
        print(f"{name:<{width}}  {scenario.claim}")
    return EXIT_OK


def cmd_describe(args):
    print(describe(args.scenario))
    return EXIT_OK


def cmd_run(args):
    config, raw = _load_target(args.target)
    workers = workers_from_env()
    result, path = run_scenario(
        config,
        config_bytes=raw,
        out_dir=args.output,
        workers=workers,
        verbose=not args.quiet,
    )
    if not args.quiet:
        print(f"Results written to {path}")
    if not result.passed:
        for line in result.report:
            print(line, file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


COMMANDS = {"list": cmd_list, "describe": cmd_describe, "run": cmd_run}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        return COMMANDS[args.command](args)
    except ResourceError as exc:
        print(f"Resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ConfigError as exc:
        print(f"Configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except WWLabError as exc:
        # a scenario parameter violated a precondition of the library
        print(f"Invalid parameters: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
