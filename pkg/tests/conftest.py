import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "conehull",
    max_examples=60,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("conehull")


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(12345))
