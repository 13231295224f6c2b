import pytest

CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call":
        return
    number, title = marker.args
    entry = CRITERIA.setdefault(number, {"title": title, "ok": True, "details": []})
    failed = report.failed or hasattr(report, "wasxfail") or report.skipped
    entry["ok"] &= not failed
    entry["details"] += [v for k, v in report.user_properties if k == "detail"]
    if hasattr(report, "wasxfail"):
        entry["details"].append(f"expected failure: {report.wasxfail}")


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        entry = CRITERIA[number]
        verdict = "PASS" if entry["ok"] else "FAIL"
        terminalreporter.write_line(f"{verdict}  criterion {number}: {entry['title']}")
        for detail in entry["details"]:
            terminalreporter.write_line(f"      {detail}")
