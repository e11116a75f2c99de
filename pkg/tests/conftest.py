import os
import sys

import pytest
from hypothesis import HealthCheck, settings

from recollada import exactlin as el
from recollada.specfile import load_example

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

EXAMPLES = ["golden", "lt2", "product", "dual_numbers", "field", "nongorenstein", "star"]


@pytest.fixture(autouse=True)
def _session_prime():
    el.set_prime(101)
    yield
    el.set_prime(101)


@pytest.fixture(scope="session")
def specs():
    el.set_prime(101)
    return {name: load_example(name) for name in EXAMPLES}


@pytest.fixture(scope="session")
def golden(specs):
    return specs["golden"]


@pytest.fixture(scope="session")
def lt2(specs):
    return specs["lt2"]


@pytest.fixture(scope="session")
def product(specs):
    return specs["product"]


@pytest.fixture(scope="session")
def dual_numbers(specs):
    return specs["dual_numbers"].algebra


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
