"""Shared pytest wiring: the acceptance suite records one PASS/FAIL line
per criterion, echoed in the terminal summary so plain `pytest -v` output
shows them."""

ACCEPTANCE_RESULTS: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_RESULTS:
            terminalreporter.write_line(line)
