import numpy as np
import pytest
from hypothesis import settings, strategies as st

from pencilroots import MATLABEX, AnalyzeConfig, Pencil, analyze, generate_pencil

settings.register_profile("default", deadline=None, max_examples=40, derandomize=True)
settings.load_profile("default")


def all_lambda_pencil():
    """``[[lam, lam], [lam, lam]]``."""
    return Pencil(np.zeros((2, 2)), np.ones((2, 2)))


@pytest.fixture
def example22():
    return all_lambda_pencil()


@pytest.fixture(scope="session")
def matlabex_report():
    return analyze(generate_pencil(MATLABEX), 0.0, AnalyzeConfig(verify=True))


@st.composite
def staircase_sizes(draw, max_k=3, max_size=4):
    """Nonincreasing ``t1 >= s1 >= t2 >= ... >= s_k`` with ``t1 >= 1``."""
    k = draw(st.integers(1, max_k))
    seq = sorted(draw(st.lists(st.integers(0, max_size), min_size=2 * k, max_size=2 * k)),
                 reverse=True)
    if seq[0] == 0:
        seq[0] = 1
    return tuple(seq[1::2]), tuple(seq[0::2])


@st.composite
def tails(draw, max_rows=3):
    r = draw(st.integers(0, max_rows))
    return r, draw(st.integers(0, r))


def crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
