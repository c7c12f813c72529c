import numpy as np
import pytest

from rmsphase import NodeCounts, PhysicalConstants


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)


@pytest.fixture(scope="session")
def nodes64():
    return NodeCounts.uniform(64)


@pytest.fixture(scope="session")
def nodes128():
    return NodeCounts.uniform(128)


@pytest.fixture(scope="session")
def dimensionless():
    return PhysicalConstants.dimensionless()
