import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance():
    """Record a one-line PASS/FAIL verdict for an acceptance criterion."""
    state = {}

    def declare(number: int, description: str) -> None:
        state["number"], state["description"] = number, description

    yield declare
    status = state.pop("status", "FAIL")
    ACCEPTANCE_LINES.append(f"criterion {state.get('number', '?')}: {status} - {state.get('description', '')}")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call" and "acceptance" in item.fixturenames:
        # the fixture teardown reads this to decide PASS/FAIL
        closure = item.funcargs.get("acceptance")
        if closure is not None and report.passed:
            for cell in closure.__closure__ or ():
                if isinstance(cell.cell_contents, dict):
                    cell.cell_contents["status"] = "PASS"


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
