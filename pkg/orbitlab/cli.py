"""Command-line interface for orbitlab."""
import argparse
import json
import logging
import sys
from typing import Any, Dict, List, Optional

from orbitlab.config import Config
from orbitlab.errors import ConfigError, NotConverged, OrbitLabError
from orbitlab.laboratory import Laboratory
from orbitlab.logger import configure_logging
from orbitlab.reports import envelope, output_path, write_csv, write_json

logger = logging.getLogger(__name__)

COMMANDS = ("analyze", "critical", "profile", "su2", "lassalle")


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """Parse command-line arguments."""
    common = argparse.ArgumentParser(add_help=False)

    common.add_argument(
        "-c", "--config",
        help="Path to config file",
        default="orbitlab.json"
    )

    common.add_argument(
        "-o", "--out",
        help="Directory for reports (default: ORBITLAB_OUT_DIR or the config's output.out_dir)",
        default=None
    )

    common.add_argument(
        "--seed",
        help="Override the sampler seed",
        type=int,
        default=None
    )

    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument(
        "-q", "--quiet",
        help="Only log warnings and errors",
        action="store_true"
    )
    verbosity.add_argument(
        "-v", "--verbose",
        help="Enable verbose logging",
        action="store_true"
    )

    parser = argparse.ArgumentParser(
        prog="orbitlab",
        description="Ricci sign and orbit-volume convexity on toric Kähler manifolds and CP^3"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    subparsers.add_parser("analyze", parents=[common], help="Ricci sign vs. convexity of the volume functionals")
    subparsers.add_parser("critical", parents=[common], help="Critical torus orbits of the volume")
    subparsers.add_parser("profile", parents=[common], help="One functional along the configured segment (CSV)")
    subparsers.add_parser("su2", parents=[common], help="Right SU(2)-orbit volumes along a geodesic in CP^3")
    subparsers.add_parser("lassalle", parents=[common], help="Haar averages of a PSH function along a geodesic")

    return parser.parse_args(argv)


def load_config(args: argparse.Namespace) -> Config:
    """Load, override and validate the configuration for a run."""
    config = Config(args.config)
    if args.seed is not None:
        if args.seed < 0:
            raise ConfigError(f"Seed must be non-negative, got {args.seed}")
        config.set_seed(args.seed)
    if args.out:
        config.out_dir = args.out
    config.ensure_valid()
    return config


def run_command(command: str, config: Config) -> List[str]:
    """Run one command and write its outputs; returns the written paths."""
    lab = Laboratory(config)
    digest = config.digest()
    out_dir = config.out_dir
    written = []

    if command == "analyze":
        report = envelope(command, digest, lab.analyze())
    elif command == "critical":
        try:
            report = envelope(command, digest, lab.critical())
        except NotConverged as e:
            if e.result is not None:
                write_json(output_path(out_dir, command, "json"), envelope(command, digest, e.result))
            raise
    else:
        summary, (header, rows) = getattr(lab, command)()
        report = envelope(command, digest, summary)
        written.append(write_csv(output_path(out_dir, command, "csv"), header, rows))

    written.append(write_json(output_path(out_dir, command, "json"), report))
    lab.publish(command, report)
    return written


def report_error(error: OrbitLabError) -> Dict[str, Any]:
    """Print the JSON error object to stdout."""
    payload = error.to_dict()
    print(json.dumps(payload, sort_keys=True, default=str))
    return payload


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for the CLI."""
    args = parse_args(argv)

    # Configure logging
    log_level = "DEBUG" if args.verbose else "WARNING" if args.quiet else "INFO"
    configure_logging(log_level)

    try:
        config = load_config(args)
        if not (args.verbose or args.quiet):
            configure_logging(config.log_level)

        written = run_command(args.command, config)
        for path in written:
            logger.info(f"Wrote {path}")
        return 0

    except OrbitLabError as e:
        logger.error(f"{e.kind}: {e.message}")
        report_error(e)
        return e.exit_code

    except ValueError as e:
        # Bad values that got past schema validation, e.g. a non-uniform grid
        error = ConfigError(str(e))
        logger.error(f"{error.kind}: {error.message}")
        report_error(error)
        return error.exit_code

    except Exception as e:
        logger.error(f"Error: {str(e)}")
        logger.debug("Detailed error:", exc_info=True)
        return 1


if __name__ == "__main__":
    sys.exit(main())
