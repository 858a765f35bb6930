import numpy as np
import pytest

CORPUS = ["x", "x^2", "exp(x)", "ln(x)", "x^2*ln(x)"]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
