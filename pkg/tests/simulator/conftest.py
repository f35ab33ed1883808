import pytest

from simtrack.simulator import preset


@pytest.fixture
def short_r14():
    """Two seconds of the two target scenario."""
    return preset('r14', seed=5).replace(duration=2.0)
