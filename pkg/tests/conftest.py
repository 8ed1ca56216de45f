import os
import sys

import numpy as np
import pytest
from hypothesis import settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

from svpattern.pattern import Pattern  # noqa: E402

PAW = Pattern.from_rows(["1100", "0100", "0111", "0001"])
DEG4 = Pattern.from_rows(["1111", "0100", "0010", "0001"])
INOUT = Pattern.from_rows(["1100", "0111", "0010", "0001"])
CLAW = Pattern.from_rows(["1001", "1100", "1010"])
R_MATRIX = np.array([[1.0, 0, 0, 1], [0, 1, 0, 1], [0, 0, 1, 1]])
EXAMPLE_8 = Pattern.from_rows(
    ["10000000", "11000000", "11100000", "11110000", "11111000", "11111000", "11111101", "11111111"]
)
FIGURE_4 = None  # built in test_structure from its edge list


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
