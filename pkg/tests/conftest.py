import numpy as np
import pytest

from qdiscrim.gates import GateSet
from qdiscrim.linalg import random_unitary


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_gateset(d, k, rng):
    return GateSet(d, [f"U{i}" for i in range(k)], [random_unitary(d, rng) for _ in range(k)])
