"""Shared test infrastructure: the acceptance suite registers one result
per criterion here, and a summary line per criterion is printed at the end
of the run (visible regardless of capture settings)."""

ACCEPTANCE_RESULTS = {}


def record_criterion(number: int, name: str, passed: bool, detail: str = "") -> None:
    ACCEPTANCE_RESULTS[number] = (name, passed, detail)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        name, passed, detail = ACCEPTANCE_RESULTS[number]
        status = "PASS" if passed else "FAIL"
        line = f"ACCEPTANCE {number}: {status} - {name}"
        if detail:
            line += f" [{detail}]"
        terminalreporter.write_line(line)
