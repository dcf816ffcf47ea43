import pytest


@pytest.fixture
def unit_vectors():
    """Orthonormal basis vectors in three dimensions."""
    return [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
