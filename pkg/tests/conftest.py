import os
import sys

import pytest
from hypothesis import settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", deadline=None, print_blob=True)
settings.load_profile("default")

# criterion number -> list of (nodeid, outcome, note)
_CRITERIA = {}
_NODE_CRITERION = {}

CRITERION_TITLES = {
    1: "axiom suite and mutation control",
    2: "Rota-Baxter catalog and the T -> -T - id involution",
    3: "post-Lie catalog, associated algebras, derivation and action checks",
    4: "cross-construction and basis-change normal forms",
    5: "classification searches",
    6: "derivations and inner representatives",
    7: "module and series layer",
    8: "determinism and failure witnesses",
}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion exercised by the test")


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            _NODE_CRITERION[item.nodeid] = m.args[0]


def pytest_runtest_logreport(report):
    n = _NODE_CRITERION.get(report.nodeid)
    if n is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        if hasattr(report, "wasxfail"):
            outcome = "xfail" if report.skipped else "xpass"
            note = report.wasxfail
        else:
            outcome = report.outcome
            note = ""
        _CRITERIA.setdefault(n, []).append((report.nodeid, outcome, note))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.write_sep("=", "acceptance criteria")
    for n in sorted(CRITERION_TITLES):
        rows = _CRITERIA.get(n)
        if not rows:
            continue
        bad = [r for r in rows if r[1] != "passed"]
        verdict = "PASS" if not bad else "FAIL"
        tr.write_line(f"criterion {n}: {verdict}  {CRITERION_TITLES[n]} "
                      f"({len(rows) - len(bad)}/{len(rows)} tests passed)")
        for nodeid, outcome, note in bad:
            name = nodeid.split("::")[-1]
            tr.write_line(f"    {outcome}: {name}" + (f"  [{note}]" if note else ""))


@pytest.fixture(scope="session")
def catalog_results():
    """One full catalog run shared by the catalog and acceptance tests."""
    from confalg import catalog

    return {r.id: r for r in catalog.verify_all()}
