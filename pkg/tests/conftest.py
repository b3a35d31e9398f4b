import os
import sys

import pytest
from hypothesis import HealthCheck, settings

from isospec import presentations
from isospec.words import Alphabet

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def ab():
    return Alphabet(("a", "b"))


@pytest.fixture
def z2():
    return presentations.parse_presentation("gens a b\nrel [a,b]\n", "z2")


@pytest.fixture
def genus2():
    return presentations.parse_presentation("gens a b c d\nrel [a,b][c,d]\n", "genus2")


@pytest.fixture
def cyclic3():
    return presentations.parse_presentation("gens a\nrel a^3\n", "z3")
