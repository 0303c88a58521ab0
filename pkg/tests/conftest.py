import math

import numpy as np
import pytest

from cqdp.dp import ClassicalTuple
from cqdp.hermitian import random_density

LN2 = math.log(2.0)

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_dp_tuple(n, dim, eps, rng):
    """Random classical eps-DP tuple.

    Each letter gets a shared base weight times factors in ``[1, e^{eps/2}]``;
    row normalizers then differ by at most another ``e^{eps/2}``.
    """
    base = rng.dirichlet(np.ones(dim))
    r = rng.uniform(1.0, math.exp(eps / 2), size=(n, dim))
    p = base * r
    return ClassicalTuple(p / p.sum(axis=1, keepdims=True))


def random_states(k, dim, rng):
    return [random_density(dim, rng, rank=int(rng.integers(1, dim + 1))) for _ in range(k)]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
