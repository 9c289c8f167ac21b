import numpy as np
import pytest

from shapley_moebius.estimators import popcounts


def random_game(rng, k, nonneg=False):
    """Random set function with val(empty) = 0, as a mask-indexed array."""
    v = rng.standard_normal(1 << k)
    if nonneg:
        from shapley_moebius.moebius import zeta_transform

        m = rng.random(1 << k)
        m[0] = 0.0
        return zeta_transform(m)
    v[0] = 0.0
    return v


@pytest.fixture
def rng():
    return np.random.default_rng(20241015)


@pytest.fixture
def card4():
    return popcounts(4)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in RESULTS:
        terminalreporter.write_line(line)
