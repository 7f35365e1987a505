import pytest

_results: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion checked by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    entry = _results.setdefault(number, {"title": title, "ok": True, "ran": False, "notes": []})
    if rep.when == "call":
        entry["ran"] = True
        entry["notes"] += [v for k, v in item.user_properties if k == "note"]
    if rep.failed:
        entry["ok"] = False


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_results):
        e = _results[number]
        status = "PASS" if e["ok"] and e["ran"] else "FAIL"
        line = f"{status} criterion {number:2d}: {e['title']}"
        if e["notes"]:
            line += " | " + "; ".join(e["notes"])
        terminalreporter.write_line(line)
