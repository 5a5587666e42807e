import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from ringstab import ring  # noqa: E402

settings.register_profile("repo", deadline=None, derandomize=True, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


@pytest.fixture(scope="session")
def z2():
    return ring.zmod(2)


@pytest.fixture(scope="session")
def z4():
    return ring.zmod(4)


@pytest.fixture(scope="session")
def z6():
    return ring.zmod(6)


@pytest.fixture(scope="session")
def dual2():
    return ring.trunc_poly(ring.zmod(2), 2)


@pytest.fixture(scope="session")
def m2f2():
    return ring.matrix_ring(2, ring.zmod(2))


@pytest.fixture(scope="session")
def ut2():
    return ring.upper_triangular(2, ring.zmod(2))


def builtin_rings():
    """One ring per family, small enough for exhaustive ring-level checks."""
    z2, z3, z4 = ring.zmod(2), ring.zmod(3), ring.zmod(4)
    return [z2, z3, z4, ring.zmod(6), ring.zmod(8), ring.trunc_poly(z2, 2), ring.trunc_poly(z2, 3),
            ring.trunc_poly(z3, 2), ring.matrix_ring(2, z2), ring.upper_triangular(2, z2),
            ring.product(z2, z2), ring.product(z2, z3), ring.product(z4, ring.trunc_poly(z2, 2)),
            ring.explicit([[0, 1], [1, 0]], [[0, 0], [0, 1]], name="F2")]


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
