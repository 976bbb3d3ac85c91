import pytest

_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by a test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    entry = _RESULTS.setdefault(number, {"title": title, "passed": True, "seconds": 0.0, "details": []})
    if report.when == "call" or report.failed:
        entry["passed"] &= report.passed
        entry["seconds"] += report.duration
    if report.when == "call":
        entry["details"].extend(v for k, v in item.user_properties if k == "detail")


@pytest.fixture
def detail(request):
    """Attach a measured value to the acceptance summary line."""

    def add(text):
        request.node.user_properties.append(("detail", text))

    return add


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_RESULTS):
        e = _RESULTS[number]
        verdict = "PASS" if e["passed"] else "FAIL"
        tr.write_line(f"criterion {number:>2} {verdict}  {e['title']}  ({e['seconds']:.1f} s)")
        for d in e["details"]:
            tr.write_line(f"              {d}")
