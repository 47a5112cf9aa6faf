import argparse
import logging
import sys
from typing import List, Optional

import tunnelkit
from tunnelkit import getenv
from tunnelkit.cli.runner import run_scenario
from tunnelkit.cli.scenario import builtin_descriptions, load_scenario
from tunnelkit.cli.sweep import sweep
from tunnelkit.errors import TunnelkitError
from tunnelkit.models.scenario import SweepParameter

logger = logging.getLogger("tunnelkit")

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_ERROR = 2


def _load_dotenv():
    try:
        from dotenv import load_dotenv
    except ImportError:
        return
    load_dotenv()


def _float_list(text: str) -> List[float]:
    try:
        return [float(value) for value in text.split(",") if value.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tunnelkit", description="Run tunnel-asymptotics scenarios"
    )
    parser.add_argument("--log-level", default=None, help="logging level (default WARNING)")
    parser.add_argument(
        "--trace", action="store_true", help="Log mean span durations at exit"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    validate = subparsers.add_parser("validate", help="Validate a scenario file")
    validate.add_argument("config", help="scenario YAML file or built-in name")

    run = subparsers.add_parser("run", help="Run a scenario")
    run.add_argument("config", help="scenario YAML file or built-in name")
    run.add_argument("--output-dir", default=None)

    sweep_parser = subparsers.add_parser("sweep", help="Run a scenario over parameter values")
    sweep_parser.add_argument("config", help="scenario YAML file or built-in name")
    sweep_parser.add_argument(
        "--param", required=True, choices=[p.value for p in SweepParameter]
    )
    sweep_parser.add_argument("--values", required=True, type=_float_list)
    sweep_parser.add_argument("--output-dir", default=None)
    sweep_parser.add_argument("--max-workers", type=int, default=None)

    subparsers.add_parser("list-builtins", help="List the built-in scenarios")
    return parser


def _max_workers(option: Optional[int]) -> Optional[int]:
    if option is not None:
        return option
    value = getenv("TUNNELKIT_MAX_WORKERS")
    return int(value) if value else None


def _execute(args: argparse.Namespace) -> int:
    if args.command == "list-builtins":
        for name, description in builtin_descriptions().items():
            print(f"{name}\t{description}")
        return EXIT_OK
    scenario = load_scenario(args.config)
    if args.command == "validate":
        print(f"{scenario.name}: ok")
        return EXIT_OK
    try:
        if args.command == "run":
            summary = run_scenario(scenario, output_dir=args.output_dir, logger=logger)
            for check in summary.checks:
                print(f"{'PASS' if check.passed else 'FAIL'}\t{check.name}\t{check.value}")
            return EXIT_OK if summary.passed else EXIT_CHECK_FAILED
        rows = sweep(
            scenario,
            SweepParameter(args.param),
            args.values,
            output_dir=args.output_dir,
            max_workers=_max_workers(args.max_workers),
            logger=logger,
        )
        return EXIT_OK if all(row["passed"] for row in rows) else EXIT_CHECK_FAILED
    except (TunnelkitError, ValueError) as e:
        print(f"error: scenario {scenario.name}: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_ERROR


def main(argv: Optional[List[str]] = None) -> int:
    _load_dotenv()
    args = make_parser().parse_args(argv)
    logging.basicConfig(
        level=(args.log_level or getenv("TUNNELKIT_LOG_LEVEL") or tunnelkit.log_level).upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    span_exporter = None
    if args.trace:
        from tunnelkit.utils.tracing import setup_tracing

        span_exporter = setup_tracing(logger)
    try:
        return _execute(args)
    except (TunnelkitError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    finally:
        if span_exporter is not None:
            for name, mean in sorted(span_exporter.mean_durations().items()):
                print(f"{name}: {mean:.6f} s", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
