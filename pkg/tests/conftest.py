"""Shared fixtures: grids and seeded field corpora.

Every random field in the suite comes from a named, fixed seed so failures
reproduce exactly; corpora are built once per session.
"""

import numpy as np
import pytest

from bo4lab.equations import CoefficientSet
from bo4lab.grid import make_grid, random_field

SQRT_PI = np.sqrt(np.pi)


@pytest.fixture(scope="session")
def grid64():
    return make_grid(64)


@pytest.fixture(scope="session")
def grid128():
    return make_grid(128)


@pytest.fixture(scope="session")
def grid256():
    return make_grid(256)


@pytest.fixture(scope="session")
def integrable():
    return CoefficientSet.integrable()


def corpus(grid, n_fields, *, decay=3.0, amplitude=1.0, tag=0):
    """Deterministic list of random fields; (tag, i) seeds the i-th field."""
    return [
        random_field(grid, decay, np.random.default_rng((tag, i)), amplitude=amplitude)
        for i in range(n_fields)
    ]


@pytest.fixture(scope="session")
def fields64(grid64):
    return corpus(grid64, 12, tag=64)


@pytest.fixture(scope="session")
def fields256(grid256):
    return corpus(grid256, 6, tag=256)
