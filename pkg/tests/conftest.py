import pytest

_LINES: list[tuple[str, bool, str]] = []


@pytest.fixture
def criterion():
    """Call ``criterion(label, ok, detail)`` to report one acceptance line."""
    def record(label, ok, detail=""):
        _LINES.append((label, bool(ok), detail))
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in _LINES:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}: {detail}")
