import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from utils.boundary_utils import named_bc, random_wellposed  # noqa: E402
from utils.matrix_utils import BeamParams  # noqa: E402


@pytest.fixture
def params():
    return BeamParams(l=1.0, alpha=1.0, k=1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def q_bc(params):
    return named_bc("Q", params)


@pytest.fixture
def clamped_bc(params):
    return named_bc("clamped", params)


@pytest.fixture
def real_bc(rng, params):
    return random_wellposed(rng, params, real=True)


@pytest.fixture
def complex_bc(rng, params):
    return random_wellposed(rng, params)
