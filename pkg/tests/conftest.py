"""Shared pytest plumbing.

The acceptance tests record a one-line verdict per criterion through the
``acceptance_report`` fixture; the terminal-summary hook replays those
lines after the run so they stay visible even though pytest captures
test stdout.
"""

import pytest


@pytest.fixture
def acceptance_report(request):
    lines = request.config.__dict__.setdefault("_acceptance_lines", [])

    def add(line: str) -> None:
        lines.append(line)
        print(line)

    return add


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
