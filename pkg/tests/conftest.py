import pytest
from hypothesis import HealthCheck, settings

from cremona.planemap import inverse
from cremona.registry import psi

settings.register_profile(
    "ci", max_examples=100, derandomize=True, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


@pytest.fixture(scope="session")
def psi_map():
    return psi()


@pytest.fixture(scope="session")
def psi_inv(psi_map):
    return inverse(psi_map)
