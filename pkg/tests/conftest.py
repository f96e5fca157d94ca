import random

import pytest
from hypothesis import strategies as st

from discretepl.measures import from_weights


@st.composite
def pmf_strategy(draw, max_width=10, resolution=24, max_offset=10):
    width = draw(st.integers(1, max_width))
    offset = draw(st.integers(-max_offset, max_offset))
    weights = draw(st.lists(st.integers(0, resolution), min_size=width, max_size=width))
    if sum(weights) == 0:
        weights[draw(st.integers(0, width - 1))] = 1
    return from_weights(offset, weights)


@pytest.fixture
def rng():
    return random.Random(20240811)
