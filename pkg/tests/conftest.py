import pytest

_results: dict[str, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(tag, title): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    tag, title = mark.args
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _results[tag] = (title, "PASS" if report.passed else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for tag in sorted(_results, key=lambda t: int(t[2:])):
        title, verdict = _results[tag]
        terminalreporter.write_line(f"{tag} {verdict}  {title}")
