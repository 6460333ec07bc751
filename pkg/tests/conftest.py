from collections import defaultdict

CRITERIA = {
    1: "worked double extension reproduces its series and canonical ideals",
    2: "bracket table of the rank-two family",
    3: "family counts and metric exclusions",
    4: "lambda trichotomy property suite",
    5: "cocycle condition iff Jacobi identity",
    6: "e_phi anticommutes with d; d o d = 0",
    7: "metric identities over the quadratic corpus",
    8: "isomorphism witness coherence",
    9: "orthogonal splitting of the metric families",
    10: "Witt decomposition post-conditions",
}

_outcomes = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion exercised by the test")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark:
            item.user_properties.append(("criterion", mark.args[0]))


def pytest_runtest_logreport(report):
    crit = dict(report.user_properties).get("criterion")
    if crit is None:
        return
    if report.when == "call" or report.outcome in ("failed", "skipped") and report.when == "setup":
        if hasattr(report, "wasxfail"):
            _outcomes[crit].append("xfail" if report.skipped else "failed")
        else:
            _outcomes[crit].append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for crit, title in CRITERIA.items():
        got = _outcomes.get(crit)
        if not got:
            continue
        if any(o in ("failed", "skipped") for o in got):
            status = "FAIL"
        elif "xfail" in got:
            status = f"DEVIATES ({got.count('xfail')} literal value(s) contradicted, strict xfail)"
        else:
            status = "PASS"
        terminalreporter.write_line(f"criterion {crit:2d} {title}: {status}")
