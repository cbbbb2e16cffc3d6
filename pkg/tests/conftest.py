from __future__ import annotations

import pytest

# criterion id -> (title, list of (test name, passed))
_ACCEPTANCE: dict[int, tuple[str, list[tuple[str, bool]]]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or report.when != "call":
        return
    cid, title = marker.args
    _ACCEPTANCE.setdefault(cid, (title, []))[1].append((item.name, report.passed))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(_ACCEPTANCE):
        title, results = _ACCEPTANCE[cid]
        ok = all(passed for _, passed in results)
        failed = [name for name, passed in results if not passed]
        line = f"criterion {cid}: {'PASS' if ok else 'FAIL'}  {title} ({len(results)} checks)"
        if failed:
            line += "  failing: " + ", ".join(failed)
        terminalreporter.write_line(line)
