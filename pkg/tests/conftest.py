import numpy as np
import pytest
from hypothesis import settings

from nspaces import catalog

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def random_gauge(rng):
    def make(n):
        a = np.triu(rng.normal(size=(n, n)), 1)
        return a + a.T
    return make


@pytest.fixture
def metric_pair():
    def make(n, seed):
        return catalog.random_metric(n, (seed, 0)), catalog.random_metric(n, (seed, 1))
    return make


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
