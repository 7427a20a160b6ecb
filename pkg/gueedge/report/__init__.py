"""
Commands, verification checks and output writers for the gueedge CLI.
"""

from .commands import cmd_edgeworth, cmd_mc, cmd_tw_table, cmd_verify
from .output import Report, render_table, write_report

__all__ = [
    "Report",
    "cmd_edgeworth",
    "cmd_mc",
    "cmd_tw_table",
    "cmd_verify",
    "render_table",
    "write_report",
]
