"""Prints one PASS/FAIL line per acceptance criterion after the run."""

import pytest

_RESULTS = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    k, label = marker.args
    gating = marker.kwargs.get("gating", True)
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _RESULTS[k] = (label, report.passed, gating, item.module)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_RESULTS):
        label, passed, gating, module = _RESULTS[k]
        tag = "PASS" if passed else "FAIL"
        if not gating:
            tag += " (informational)"
        info = getattr(module, "INFO", {}).get(k)
        suffix = f" [{info}]" if info else ""
        terminalreporter.write_line(f"criterion {k:>2}: {tag}  {label}{suffix}")
