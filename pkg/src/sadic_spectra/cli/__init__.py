"""Command-line interface: argument parsing, subcommands and artifact writers."""

from sadic_spectra.cli.commands import COMMANDS, RunContext, run
from sadic_spectra.cli.main import build_parser, config_from_args, main

__all__ = [
    "COMMANDS",
    "RunContext",
    "build_parser",
    "config_from_args",
    "main",
    "run",
]
