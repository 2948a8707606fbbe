import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from relcalc import relation as rel
from relcalc.subspace import Subspace

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

E1 = np.array([1, 0], dtype=complex)
E2 = np.array([0, 1], dtype=complex)
Z2 = np.zeros(2, dtype=complex)


def make_a_sd():
    """span{(e1 | 0), (0 | e2)} in C^2: selfadjoint, singular, mul = span e2."""
    return rel.from_graph([np.r_[E1, Z2], np.r_[Z2, E2]], 2)


def nilpotent():
    return rel.from_operator(np.array([[0, 1], [0, 0]], dtype=complex))


def zero_on_e1():
    return rel.zero_on(Subspace(E1[:, None]))


@pytest.fixture
def a_sd():
    return make_a_sd()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# acceptance results are collected here and summarized at the end of the run
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[num])
