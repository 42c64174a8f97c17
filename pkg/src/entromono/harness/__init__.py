"""Scenario runner and command-line interface."""

from .cache import ENV_VAR, LevelCache
from .cli import main, run
from .commands import COMMANDS
from .report import REPORT_SCHEMA_VERSION
from .scenario import SCENARIO_SCHEMA_VERSION, Scenario

__all__ = ["COMMANDS", "ENV_VAR", "LevelCache", "REPORT_SCHEMA_VERSION", "SCENARIO_SCHEMA_VERSION", "Scenario", "main", "run"]
