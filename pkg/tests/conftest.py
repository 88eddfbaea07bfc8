"""Shared acceptance-summary plumbing.

Acceptance tests call :func:`record` once per criterion *before* their
assertions, so the terminal summary prints one PASS/FAIL line per criterion
even when a criterion fails red.
"""

ACCEPTANCE_LOG: list[tuple[str, bool, str]] = []


def record(name: str, ok: bool, detail: str = "") -> None:
    """Log one acceptance-criterion outcome for the terminal summary."""
    ACCEPTANCE_LOG.append((name, bool(ok), detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LOG:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_LOG:
        line = f"[{'PASS' if ok else 'FAIL'}] {name}"
        if detail:
            line += f": {detail}"
        terminalreporter.write_line(line)
