import pytest

ACCEPTANCE_LINES: dict[str, str] = {}


@pytest.fixture
def criterion(request):
    """Record one pass/fail line for an acceptance criterion, then assert it."""

    def record(label: str, ok: bool, detail: str):
        ACCEPTANCE_LINES[label] = f"criterion {label:<3} {'PASS' if ok else 'FAIL'}  {detail}"
        print(ACCEPTANCE_LINES[label])
        assert ok, detail

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for label in sorted(ACCEPTANCE_LINES, key=lambda s: (int(s.rstrip("abc")), s)):
            terminalreporter.write_line(ACCEPTANCE_LINES[label])
