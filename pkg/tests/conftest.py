import os

import pytest
from hypothesis import HealthCheck, settings

from quantlang.core import LIMAVG, automaton

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=200, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def a_counter():
    return automaton("ca", "ab", 1, 0, [(0, "a", 0, 1), (0, "b", 0, 0)], LIMAVG)

