import pytest

from pqdurrmeyer import PqParams


@pytest.fixture
def params():
    return PqParams(0.5, 0.4)
