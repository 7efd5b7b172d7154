import pytest

_LINES: list[str] = []


@pytest.fixture
def record():
    """Collect one summary line per acceptance criterion."""

    def _record(number: int, title: str, passed: bool, detail: str = "") -> bool:
        line = f"criterion {number:>2} [{title}]: {'PASS' if passed else 'FAIL'}"
        if detail:
            line += f"  ({detail})"
        _LINES.append(line)
        print(line)
        return passed

    return _record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
