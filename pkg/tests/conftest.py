"""Collects acceptance outcomes and prints one line per criterion."""

_outcomes: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            number, title = mark.args
            _outcomes.setdefault(number, {"title": title, "ok": True, "ran": 0, "nodes": []})
            item.user_properties.append(("criterion", number))


def pytest_runtest_logreport(report):
    number = dict(report.user_properties).get("criterion")
    if number is None:
        return
    entry = _outcomes[number]
    if report.when == "call" or report.failed or report.skipped:
        if report.failed or report.skipped:
            entry["ok"] = False
            entry["nodes"].append(report.nodeid.split("::")[-1])
        if report.when == "call":
            entry["ran"] += 1


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_outcomes):
        entry = _outcomes[number]
        status = "FAIL" if not entry["ok"] else "PASS" if entry["ran"] else "NOT RUN"
        detail = f" ({', '.join(entry['nodes'])})" if entry["nodes"] else ""
        terminalreporter.write_line(f"criterion {number:2d} {status}: {entry['title']}{detail}")
