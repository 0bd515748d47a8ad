import pytest

_RESULTS = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        label = mark.args[0]
        if hasattr(item, "callspec"):
            label = f"{label} [{item.callspec.id}]"
        _RESULTS.append((label, rep.passed))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok in _RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}")
