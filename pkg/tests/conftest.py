import os

import pytest
from hypothesis import HealthCheck, settings

from balpack import validate_instance

settings.register_profile(
    "default", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("quick", max_examples=25, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def worked():
    return validate_instance([8, 7, 6, 5, 4], 10)
