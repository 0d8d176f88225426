from __future__ import annotations

from cli.commands import COMMANDS, build_parser, exit_code, main, setup_logging

__all__ = ["COMMANDS", "build_parser", "exit_code", "main", "setup_logging"]
