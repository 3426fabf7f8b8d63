"""Shared test hooks: collects acceptance-criterion results and prints one
pass/fail line per criterion in the terminal summary."""

ACCEPTANCE_LINES = []


def record_criterion(number, passed, detail):
    status = "PASS" if passed else "FAIL"
    ACCEPTANCE_LINES.append(f"CRITERION {number}: {status} — {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES,
                       key=lambda s: int(s.split()[1].rstrip(":"))):
        terminalreporter.write_line(line)
