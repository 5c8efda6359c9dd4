import pytest

_LINES_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_LINES_KEY] = []


@pytest.fixture
def criterion(request):
    """``criterion(n, ok, detail)`` prints and records one pass/fail line."""
    lines = request.config.stash[_LINES_KEY]

    def record(number: int, ok: bool, detail: str = "") -> bool:
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}" + (f"  {detail}" if detail else "")
        print(line)
        lines.append(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash[_LINES_KEY]
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
