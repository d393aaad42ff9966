import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from subhardy import catalog

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_complex(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_gram_space(rng, D, m=None):
    """Span of m random vectors with a random positive-definite Gram matrix."""
    m = D if m is None else m
    V = random_complex(rng, D, m)
    X = random_complex(rng, m, m)
    G = X @ X.conj().T + m * np.eye(m)
    from subhardy import GramSpace

    return GramSpace(V, G)


@pytest.fixture
def alternating():
    return catalog.builtin("paper-alternating", 32)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
