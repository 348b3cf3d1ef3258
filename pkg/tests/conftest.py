import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from jacobikit import JacobiMatrix

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

SQ2 = math.sqrt(2.0)


@pytest.fixture
def free3():
    return JacobiMatrix([0.0, 0.0, 0.0], [1.0, 1.0])


@pytest.fixture
def swap2():
    return JacobiMatrix([0.0, 0.0], [1.0])


@st.composite
def jacobi_matrices(draw, n_min=1, n_max=8):
    N = draw(st.integers(n_min, n_max))
    q = draw(st.lists(st.floats(-2, 2, allow_nan=False), min_size=N, max_size=N))
    b = draw(st.lists(st.floats(0.5, 2, allow_nan=False), min_size=N - 1, max_size=N - 1))
    return JacobiMatrix(q, b)


@st.composite
def measures(draw, n_min=1, n_max=8):
    """Normalized discrete measures with well separated points."""
    from jacobikit import DiscreteMeasure

    M = draw(st.integers(n_min, n_max))
    gaps = draw(st.lists(st.floats(0.05, 1.0), min_size=M, max_size=M))
    start = draw(st.floats(-3, 0))
    pts = start + np.cumsum(gaps)
    w = np.array(draw(st.lists(st.floats(0.05, 1.0), min_size=M, max_size=M)))
    return DiscreteMeasure(pts, w / w.sum())


def random_jacobi(seed, N):
    rng = np.random.default_rng(seed)
    return JacobiMatrix(rng.uniform(-2, 2, N), rng.uniform(0.5, 2, N - 1))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import LINES
    except ImportError:
        return
    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
