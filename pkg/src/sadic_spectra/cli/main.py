"""``sadic`` command-line entry point.

    sadic validate --subs thue_morse,period_doubling
    sadic mahler --poly substitution:thue_morse --method jensen
    sadic criterion --subs thue_morse,period_doubling --directive bernoulli:0.5,0.5
    sadic simulate --subs thue_morse --directive constant:1 --level 12 --out runs/tm

Exit status 0 on success, 1 with error JSON on stderr for validation or
numerical failures, 2 for resource-cap violations.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from sadic_spectra import ARTIFACT_VERSION, __version__
from sadic_spectra.cli.commands import MAHLER_METHODS, run
from sadic_spectra.config import (
    DEFAULT_PROFILE_NAME,
    DEFAULT_PROFILES_PATH,
    RunConfig,
    RunProfileLoader,
)
from sadic_spectra.errors import ConfigError, SadicError
from sadic_spectra.observability import RunLogger, run_id_for

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


# ═══════════════════════════════════════════════════════════════════════════════
# Argument parsing
# ═══════════════════════════════════════════════════════════════════════════════


def _csv_list(text: str) -> list[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def _t_point(text: str) -> list[float]:
    try:
        return [float(c) for c in text.split(",")]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"bad t point '{text}'") from e


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--subs",
        type=_csv_list,
        action="extend",
        default=None,
        help="Substitution files or shipped names, comma separated (repeatable)",
    )
    common.add_argument("--directive", help="Directive spec, e.g. bernoulli:0.5,0.5")
    common.add_argument("--seed", type=int, help="Seed for every random stream")
    common.add_argument("--steps", type=int, help="Cocycle steps per t-sample")
    common.add_argument("--t-samples", type=int, help="Number of torus samples")
    common.add_argument("--grid", type=int, dest="grid_per_axis", help="Grid points per axis")
    common.add_argument("--threads", type=int, help="Worker budget")
    common.add_argument("--max-cells", type=int, help="Patch cell cap")
    common.add_argument("--max-t-grid", type=int, help="Wave-vector grid cap")
    common.add_argument("--profile", default=DEFAULT_PROFILE_NAME, help="Run profile name")
    common.add_argument(
        "--profiles-file", type=Path, default=DEFAULT_PROFILES_PATH, help="Run profiles JSON"
    )
    common.add_argument("--out", help="Output path (prefix for simulate); stdout if omitted")
    common.add_argument("--audit-log", type=Path, help="Write a JSONL audit trail here")
    common.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Logging level on stderr",
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sadic",
        description="Block substitutions, Fourier cocycles and S-adic patch statistics",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    common = _common_parser()

    sub.add_parser("validate", parents=[common], help="Validate substitution files")

    fourier = sub.add_parser("fourier-eval", parents=[common], help="Evaluate Fourier matrices")
    fourier.add_argument(
        "--t", type=_t_point, action="append", help="Wave vector t (comma separated, repeatable)"
    )

    mahler = sub.add_parser("mahler", parents=[common], help="Logarithmic Mahler measure")
    mahler.add_argument("--poly", required=True, help="poly:<expr> or substitution:<name>")
    mahler.add_argument("--method", choices=MAHLER_METHODS, default="auto")

    sub.add_parser("lyapunov", parents=[common], help="Cocycle Lyapunov exponents")
    sub.add_parser("criterion", parents=[common], help="Criterion margin and verdict")

    simulate = sub.add_parser("simulate", parents=[common], help="Supertile statistics")
    simulate.add_argument("--level", type=int, default=8, help="Substitution levels")
    simulate.add_argument("--seed-letter", type=int, default=1, help="Letter to inflate")
    simulate.add_argument("--weights", help="Per-letter weights, e.g. 1,-1")
    simulate.add_argument("--radius", type=int, help="Pair-correlation radius")
    simulate.add_argument(
        "--t", type=_t_point, action="append", help="Direct-sum wave vector (repeatable)"
    )
    return parser


_OPTION_KEYS = ("t", "poly", "method", "level", "seed_letter", "weights", "radius")


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Profile defaults overlaid by every flag that was given.

    Raises:
        ConfigError: unknown profile or a flag outside its allowed range.
    """
    profiles = RunProfileLoader()
    profiles.load_from_json(args.profiles_file)
    profile = profiles.get_profile(args.profile)

    options: dict[str, Any] = {
        key: getattr(args, key) for key in _OPTION_KEYS if getattr(args, key, None) is not None
    }
    try:
        return RunConfig.from_profile(
            profile,
            args.subcommand,
            ARTIFACT_VERSION,
            substitutions=args.subs,
            directive=args.directive,
            seed=args.seed,
            steps=args.steps,
            t_samples=args.t_samples,
            grid_per_axis=args.grid_per_axis,
            max_cells=args.max_cells,
            max_t_grid=args.max_t_grid,
            threads=args.threads,
            out=args.out,
            options=options,
        )
    except ValidationError as e:
        problems = [f"{' -> '.join(map(str, err['loc']))}: {err['msg']}" for err in e.errors()]
        raise ConfigError("invalid run configuration", problems=problems) from e


# ═══════════════════════════════════════════════════════════════════════════════
# Entry point
# ═══════════════════════════════════════════════════════════════════════════════


def _fail(error: SadicError) -> int:
    sys.stderr.write(json.dumps(error.to_dict(), sort_keys=True, default=str) + "\n")
    return error.exit_status


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level, format=LOG_FORMAT, stream=sys.stderr)

    try:
        config = config_from_args(args)
        if args.audit_log is None:
            return run(config)
        with RunLogger(args.audit_log, run_id_for(config.header()), config.subcommand) as audit:
            return run(config, audit=audit)
    except SadicError as e:
        logger.error("%s failed: %s", args.subcommand, e.message)
        return _fail(e)


if __name__ == "__main__":
    sys.exit(main())


__all__ = ["build_parser", "config_from_args", "main"]
