"""Shared pytest hooks.

The acceptance module records one status line per release criterion; echo
them after the run so the gate is readable from the terminal log even with
output capture active.
"""

ACCEPTANCE_REPORT: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_REPORT:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_REPORT:
            terminalreporter.write_line(line)
