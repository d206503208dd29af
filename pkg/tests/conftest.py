import pytest

_CRITERIA = {}


@pytest.fixture
def criterion(request):
    """Record one acceptance line: criterion(id, passed, detail)."""

    def record(cid: str, passed: bool, detail: str = "") -> bool:
        _CRITERIA[cid] = (passed, detail)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(_CRITERIA, key=lambda c: int(c[1:])):
        passed, detail = _CRITERIA[cid]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'} {cid}: {detail}")
