import sys

import pytest
from hypothesis import HealthCheck, settings

from cclab.catalog import build_catalog
from cclab.quiver import d4_quiver, kronecker_quiver, linear_quiver

settings.register_profile("ci", deadline=None, suppress_health_check=[HealthCheck.too_slow], derandomize=True)
settings.load_profile("ci")


@pytest.fixture(scope="session")
def A2():
    return linear_quiver(2)


@pytest.fixture(scope="session")
def A3():
    return linear_quiver(3)


@pytest.fixture(scope="session")
def D4():
    return d4_quiver()


@pytest.fixture(scope="session")
def K():
    return kronecker_quiver()


@pytest.fixture(scope="session")
def kcat(K):
    return build_catalog(K)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for k in sorted(lines):
            terminalreporter.write_line(lines[k])
