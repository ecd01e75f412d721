import pytest
from hypothesis import HealthCheck, settings

from ehrelay.config import SystemConfig

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture
def defaults():
    return SystemConfig()
