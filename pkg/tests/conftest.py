import hypothesis
import numpy as np
import pytest
from hypothesis import strategies as st

hypothesis.settings.register_profile("default", max_examples=40, deadline=None, derandomize=True)
hypothesis.settings.register_profile("thorough", max_examples=400, deadline=None)
hypothesis.settings.load_profile("default")

THREE_ROWS = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, -1.0]])


@pytest.fixture
def three_rows():
    return THREE_ROWS.copy()


def gaussian(seed: int, m: int, n: int) -> np.ndarray:
    return np.random.default_rng(seed).standard_normal((m, n))


@st.composite
def small_matrices(draw, min_m=1, max_m=5, min_n=1, max_n=4):
    m = draw(st.integers(min_m, max_m))
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    return gaussian(seed, m, n)


@st.composite
def integer_matrices(draw, max_m=4, max_n=3):
    """Small integer entries: hits degenerate cases (zero rows, parallel rows) often."""
    m = draw(st.integers(1, max_m))
    n = draw(st.integers(1, max_n))
    vals = draw(st.lists(st.integers(-2, 2), min_size=m * n, max_size=m * n))
    return np.array(vals, dtype=float).reshape(m, n)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        ok, detail = RESULTS[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
