import math
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ddeba import Dataset, Feature, FeatureKind, ProjectRecord, Schema  # noqa: E402
from ddeba.errors import EstimationError  # noqa: E402

LEVELS = ("low", "mid", "high")


def mixed_schema(n_interval=2):
    feats = [Feature(f"x{m}", FeatureKind.INTERVAL) for m in range(n_interval)]
    feats.append(Feature("lang", FeatureKind.NOMINAL))
    feats.append(Feature("cx", FeatureKind.ORDINAL, LEVELS))
    return Schema(tuple(feats), "effort")


def random_record(rng, n_interval=2, p_missing=0.15, effort=True):
    vals = []
    for _ in range(n_interval):
        vals.append(None if rng.random() < p_missing else float(rng.integers(0, 21)))
    vals.append(str(rng.choice(["java", "c", "cobol"])))  # always present
    vals.append(None if rng.random() < p_missing else str(rng.choice(LEVELS)))
    return ProjectRecord(tuple(vals), float(rng.integers(100, 1001)) if effort else None)


def random_dataset(rng, n, n_interval=2, p_missing=0.15):
    schema = mixed_schema(n_interval)
    return Dataset(schema, [random_record(rng, n_interval, p_missing) for _ in range(n)])


def random_query_distances(rng, dataset, tries=50):
    from ddeba import distances_to_query

    for _ in range(tries):
        try:
            return distances_to_query(random_record(rng, effort=False), dataset)
        except EstimationError:
            continue
    raise RuntimeError("could not draw a usable query")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def six_projects():
    """Hand-built 6-project fixture used by several modules."""
    schema = Schema(
        (
            Feature("size", FeatureKind.INTERVAL),
            Feature("lang", FeatureKind.NOMINAL),
            Feature("cx", FeatureKind.ORDINAL, LEVELS),
        ),
        "effort",
    )
    rows = [
        ((10.0, "java", "low"), 100.0),
        ((20.0, "java", "mid"), 220.0),
        ((40.0, "c", "mid"), 380.0),
        ((70.0, "c", "high"), 700.0),
        ((90.0, "java", "high"), 950.0),
        ((110.0, "cobol", None), 1200.0),
    ]
    return Dataset(schema, [ProjectRecord(v, e) for v, e in rows])


# ---------------------------------------------------------------------------
# Acceptance summary: one PASS/FAIL line per criterion.

_criteria: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    item_marker = getattr(report, "criterion", None)
    if item_marker is None:
        return
    number, title = item_marker
    entry = _criteria.setdefault(number, {"title": title, "passed": True, "nodes": []})
    entry["nodes"].append(report.nodeid)
    if report.failed:
        entry["passed"] = False


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        rep.criterion = marker.args


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        entry = _criteria[number]
        status = "PASS" if entry["passed"] else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {number}: {entry['title']}")


def approx_rel(a, b, rel):
    return math.isclose(a, b, rel_tol=rel, abs_tol=0.0) or a == b
