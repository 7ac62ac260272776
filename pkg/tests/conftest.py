import pytest

_CRITERIA = {}


@pytest.fixture
def criterion(request):
    """Register an acceptance criterion; its outcome is printed in the summary."""

    def register(label):
        _CRITERIA[request.node.nodeid] = label

    return register


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    outcomes = {}
    for key in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(key, []):
            if rep.nodeid in _CRITERIA and (rep.when == "call" or key == "error"):
                outcomes[rep.nodeid] = "PASS" if key == "passed" else "FAIL"
    terminalreporter.section("acceptance criteria")
    for nodeid, label in sorted(_CRITERIA.items(), key=lambda kv: kv[1]):
        terminalreporter.write_line(f"[{outcomes.get(nodeid, 'FAIL')}] {label}")
