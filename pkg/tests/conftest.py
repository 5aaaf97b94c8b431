import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "occ",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("occ")


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pad(*coeffs, order=8):
    """Zero-padded coefficient tuple of length ``order``."""
    return tuple(coeffs) + (0,) * (order - len(coeffs))
