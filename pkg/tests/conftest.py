import os
import time

import pytest

from specflow import LFunctionSpec, zero_table

# acceptance outcomes collected for the terminal summary
ACCEPTANCE_LINES: list[str] = []
# wall-clock seconds spent building the shared session fixtures
FIXTURE_SECONDS: dict[str, float] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def cache_root(tmp_path_factory):
    """Zero-table cache: $SPECFLOW_CACHE_DIR when set, else a session temp dir."""
    return os.environ.get("SPECFLOW_CACHE_DIR") or str(tmp_path_factory.mktemp("zero-cache"))


@pytest.fixture(scope="session")
def zeta():
    return LFunctionSpec.zeta()


@pytest.fixture(scope="session")
def dh_spec():
    return LFunctionSpec.davenport_heilbronn()


@pytest.fixture(scope="session")
def zeta_zeros_10k(cache_root, zeta):
    """Records for zeta zeros n = 1..10^4 on the critical line."""
    t0 = time.perf_counter()
    recs = zero_table(zeta, 1, 10_000, cache=cache_root)
    FIXTURE_SECONDS["zeta_zeros_10k"] = time.perf_counter() - t0
    return recs


@pytest.fixture(scope="session")
def spacing_levels(cache_root, zeta):
    """E_n(sigma) for n = 10^4..1.5*10^4 at sigma = 1/2 and 0.6."""
    t0 = time.perf_counter()
    tables = {sig: zero_table(zeta, 10_000, 15_000, sig, cache=cache_root) for sig in (0.5, 0.6)}
    FIXTURE_SECONDS["spacing_levels"] = time.perf_counter() - t0
    return tables
