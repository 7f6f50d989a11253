import pytest

_criteria: list[tuple[str, str, str, float]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(tag, text): acceptance criterion reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        status = "PASS" if rep.passed else ("SKIP" if rep.skipped else "FAIL")
        _criteria.append((marker.args[0], marker.args[1], status, rep.duration))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for tag, text, status, duration in sorted(_criteria, key=lambda c: int(c[0][2:])):
        terminalreporter.write_line(f"{status}  {tag:<5} {text}  ({duration:.2f}s)")
