import pytest

_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(key, title): acceptance criterion check")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or report.when not in ("setup", "call"):
        return
    key, title = marker.args
    if report.when == "setup" and report.passed:
        return
    detail = "; ".join(f"{k}={v}" for k, v in item.user_properties)
    previous = _RESULTS.get(key, (title, True, []))
    details = previous[2] + ([detail] if detail else [])
    _RESULTS[key] = (title, previous[1] and report.passed, details)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_RESULTS, key=lambda k: int(k[2:])):
        title, passed, details = _RESULTS[key]
        line = f"{key} {'PASS' if passed else 'FAIL'}  {title}"
        if details:
            line += "  [" + " | ".join(details) + "]"
        terminalreporter.write_line(line)
