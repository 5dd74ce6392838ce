import time

import numpy as np
import pytest

from pulseforge.analysis import TABLES, table_column_fwhm

_COLUMNS = {}
ACCEPTANCE = pytest.StashKey[dict]()


def cached_column(table_id, scheme):
    """``(cells, seconds)`` for one table column, computed once per session."""
    key = (table_id, scheme)
    if key not in _COLUMNS:
        start = time.perf_counter()
        cells = table_column_fwhm(table_id, scheme)
        _COLUMNS[key] = (cells, time.perf_counter() - start)
    return _COLUMNS[key]


def cached_table(table_id):
    return [c for col in TABLES[table_id]["columns"] for c in cached_column(table_id, col.scheme)[0]]


@pytest.fixture(scope="session")
def table_cells():
    return cached_table


@pytest.fixture(scope="session")
def table_column():
    return cached_column


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_configure(config):
    config.stash[ACCEPTANCE] = {}


@pytest.fixture
def record(request):
    """Log ``(criterion, ok, detail)`` for the per-criterion summary printed at the end."""
    log = request.config.stash[ACCEPTANCE]

    def _record(criterion, ok, detail):
        log.setdefault(criterion, []).append((bool(ok), detail))

    return _record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    log = config.stash.get(ACCEPTANCE, {})
    if not log:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(log):
        entries = log[criterion]
        failed = [d for ok, d in entries if not ok]
        status = "PASS" if not failed else "FAIL"
        detail = f"{len(entries) - len(failed)}/{len(entries)} checks"
        if failed:
            detail += "; failing: " + "; ".join(failed)
        terminalreporter.write_line(f"criterion {criterion:>2}: {status}  {detail}")
