import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line per acceptance criterion."""
    name = request.node.name.removeprefix("test_")
    state = {"detail": ""}

    def note(detail):
        state["detail"] = detail

    yield note
    failed = getattr(request.node, "rep_call", None)
    ok = failed is not None and failed.passed
    line = f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({state['detail']})" if state["detail"] else "")
    ACCEPTANCE_LINES.append(line)
    print("\n" + line)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
