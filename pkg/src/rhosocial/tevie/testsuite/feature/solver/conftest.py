# src/rhosocial/tevie/testsuite/feature/solver/conftest.py
"""
Fixtures for the "solver" feature tests.

The `scene` fixture is parameterized by the scenarios the registered provider
offers, so every test that uses it runs once per built-in (or downstream)
scene. Teardown goes through the provider's `cleanup_after_test`.
"""
import pytest

from rhosocial.tevie.testsuite.utils import get_scenario_provider, scenario_params

# Discover the scenarios at module import time.
SCENARIO_PARAMS = scenario_params()


@pytest.fixture(scope="function", params=SCENARIO_PARAMS)
def scene(request):
    """A small scene (size 6) for each registered scenario."""
    scenario = request.param
    provider = get_scenario_provider()
    yield provider.setup_scene(scenario, seed=7, size=6)
    provider.cleanup_after_test(scenario)


@pytest.fixture(scope="function", params=SCENARIO_PARAMS)
def scene_and_wave(request):
    """The scene together with the provider's incident wave."""
    scenario = request.param
    provider = get_scenario_provider()
    yield provider.setup_scene(scenario, seed=7, size=6), provider.incident_wave(scenario)
    provider.cleanup_after_test(scenario)
