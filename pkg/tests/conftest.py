import pytest
from hypothesis import HealthCheck, settings

from pfinhier import Hierarchy

settings.register_profile(
    "exact",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("exact")


@pytest.fixture(scope="session")
def hier() -> Hierarchy:
    # shared warm instance; tests that need cold timing build their own
    return Hierarchy(floor_level=4)
