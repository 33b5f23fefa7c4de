"""Shared pytest wiring for the acceptance gate's per-criterion lines.

Default capture swallows stdout of passing tests, so the gate records its
one-line verdicts in a registry and they are replayed here in the terminal
summary, which renders outside capture.
"""
from __future__ import annotations

import sys


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "REPORT_LINES", None) if mod else None
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
