import pytest

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_log():
    """Record one pass/fail line per acceptance criterion."""

    def log(criterion: int, passed: bool, detail: str) -> None:
        line = f"criterion {criterion}: {'PASS' if passed else 'FAIL'} - {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)

    return log


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
