from fractions import Fraction

import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from negdep import from_weights

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@st.composite
def rational_measures(draw, min_n=1, max_n=3, zeros=True):
    """Random rational measures; zero atoms are common, as on lattice boundaries."""
    n = draw(st.integers(min_n, max_n))
    lo = 0 if zeros else 1
    w = draw(st.lists(st.integers(lo, 6), min_size=1 << n, max_size=1 << n).filter(any))
    return from_weights(w)


@st.composite
def positive_fractions(draw, max_den=6):
    den = draw(st.integers(2, max_den))
    return Fraction(draw(st.integers(1, den - 1)), den)


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)
