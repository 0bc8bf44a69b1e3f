import numpy as np
import pytest

from cknlab.quadrature import QuadratureSpec


@pytest.fixture
def rng():
    return np.random.default_rng(20260815)


@pytest.fixture
def spec():
    return QuadratureSpec()
