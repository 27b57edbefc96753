import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_results = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, text): acceptance criterion checked by this test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, text = mark.args
    # the call phase decides; a setup error counts as a failure
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        if hasattr(rep, "wasxfail"):
            status = "XFAIL" if rep.skipped else "XPASS"
        else:
            status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[rep.outcome]
        _results.setdefault((n, text), []).append(status)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for (n, text), statuses in sorted(_results.items(), key=lambda kv: (kv[0][0], kv[0][1])):
        worst = next((s for s in ("FAIL", "XPASS", "XFAIL", "SKIP") if s in statuses), "PASS")
        tr.write_line(f"criterion {n:>2}: {worst:<5} {text}")
