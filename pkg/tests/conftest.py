import numpy as np
import pytest

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion covered by the test")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    crit = getattr(report, "_criterion", None)
    if crit is None:
        return
    n, title = crit
    entry = _CRITERIA.setdefault(n, {"results": []})
    entry["results"].append((title, report.nodeid.split("::")[-1], report.outcome))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is not None:
        rep._criterion = (m.args[0], m.args[1])


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        results = _CRITERIA[n]["results"]
        ok = all(outcome == "passed" for _, _, outcome in results)
        bad = sum(outcome != "passed" for _, _, outcome in results)
        tr.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'} ({len(results) - bad}/{len(results)} sub-tests)")
        for title, name, outcome in results:
            tr.write_line(f"    {'pass' if outcome == 'passed' else 'FAIL'}  {title}  [{name}]")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
