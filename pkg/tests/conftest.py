import numpy as np
import pytest

from curv.curvature import core as cc


@pytest.fixture
def rand_R():
    def make(n, seed=0, mode="rational"):
        return cc.random_algebraic_curvature(seed, n, mode=mode)

    return make


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in RESULTS:
        terminalreporter.write_line(line)
