import pytest

_ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def report():
    """``report(n, ok, detail)`` records the verdict line for acceptance criterion ``n``."""

    def _report(criterion: int, ok: bool, detail: str) -> None:
        line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'}  {detail}"
        _ACCEPTANCE_LINES[criterion] = line
        print(line)

    return _report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(_ACCEPTANCE_LINES[k])
