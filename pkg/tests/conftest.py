import os
from pathlib import Path

import pytest

from multilatin import Quasigroup, enumerate_main_classes, parse_mls
from multilatin.io import read_file

DATA = Path(__file__).parent / "data"

# order-4 idempotent quasigroup behind the U4 and U42 fixtures
REFERENCE_QUASIGROUP = ((1, 4, 2, 3), (3, 2, 4, 1), (4, 1, 3, 2), (2, 3, 1, 4))

# (n, k) -> (classes, erodable, separable, simple)
FAST_TIER = {
    (3, 1): (1, 0, 0, 1),
    (3, 2): (4, 3, 3, 1),
    (3, 3): (9, 9, 9, 1),
    (3, 4): (24, 22, 24, 0),
    (3, 5): (50, 50, 50, 0),
    (3, 6): (117, 115, 117, 0),
    (4, 1): (2, 0, 0, 2),
    (4, 2): (44, 26, 26, 10),
    (5, 1): (2, 0, 0, 2),
}
SLOW_TIER = {
    (3, 7): (237, 237, 237, 0),
    (3, 8): (488, 485, 488, 0),
    (3, 9): (924, 924, 924, 0),
    (4, 3): (2424, 2181, 2181, 2),
    (6, 1): (12, 0, 0, 12),
}


def pytest_addoption(parser):
    parser.addoption(
        "--long-run",
        action="store_true",
        default=False,
        help="run the slow census rows (hours); MLS_LONG_RUN=1 does the same",
    )


def long_run_enabled(config) -> bool:
    return config.getoption("--long-run") or os.environ.get("MLS_LONG_RUN", "") not in ("", "0")


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")
    config._criteria = {}


def pytest_collection_modifyitems(config, items):
    if long_run_enabled(config):
        return
    skip = pytest.mark.skip(reason="slow census row; use --long-run or MLS_LONG_RUN=1")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


def load(name, require_complete=False):
    return parse_mls(read_file(DATA / name), require_complete=require_complete)


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def ref_q():
    return Quasigroup(REFERENCE_QUASIGROUP)


@pytest.fixture(scope="session")
def fast_corpus():
    """Main-class representatives for every fast-tier (n, k)."""
    return {nk: enumerate_main_classes(*nk) for nk in FAST_TIER}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (report.when != "call" and report.passed):
        return
    verdict = "SKIP" if report.skipped else "FAIL" if report.failed else "PASS"
    item.config._criteria.setdefault(mark.args[0], []).append(verdict)

def pytest_terminal_summary(terminalreporter, config):
    criteria = getattr(config, "_criteria", {})
    if not criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(criteria):
        seen = criteria[n]
        verdict = "FAIL" if "FAIL" in seen else "PASS" if "PASS" in seen else "SKIP"
        note = f"{len(seen)} test{'s' if len(seen) != 1 else ''}"
        if verdict == "SKIP":
            note += ", needs --long-run"
        terminalreporter.write_line(f"criterion {n}: {verdict} ({note})")
