# src/rhosocial/tevie/testsuite/conftest.py
"""
Root pytest configuration for the tevie testsuite.

It points the suite at a scenario provider registry, registers the markers
used to select test groups and warns at session start when the runtime
budget is too small for the expensive groups.
"""
import os
import warnings

import numpy as np
import pytest

from rhosocial.tevie.core.registry import DEFAULT_REGISTRY, REGISTRY_ENV

# The suite is generic over scenario providers; this environment variable tells
# it where to import the registry from. `setdefault` keeps an override made by
# the caller, e.g. a downstream package shipping its own scenes.
os.environ.setdefault(REGISTRY_ENV, DEFAULT_REGISTRY)

# Largest runtime any bundled test declares.
EXPENSIVE_GROUP_BUDGET = 300.0


def pytest_configure(config):
    """
    A pytest hook that runs at the beginning of a test session to configure
    the test environment.
    """
    # `pytest -m feature` runs only the per-module tests.
    config.addinivalue_line("markers", "feature: per-module unit and property tests")
    config.addinivalue_line("markers", "realworld: acceptance runs against independent references")
    config.addinivalue_line("markers", "benchmark: timing-sensitive scaling measurements")


def pytest_sessionstart(session):
    """Warn when the configured budget will skip the expensive groups."""
    try:
        from .plugin.pytest_tevie_budget import BUDGET_ENV, runtime_budget
        budget = runtime_budget()
        if budget < EXPENSIVE_GROUP_BUDGET:
            warnings.warn(
                f"{BUDGET_ENV}={budget:g}s is below {EXPENSIVE_GROUP_BUDGET:g}s; "
                f"the slowest realworld tests will be skipped.",
                UserWarning
            )
    except Exception as e:
        warnings.warn(f"Could not check the runtime budget at session start: {e}", UserWarning)


@pytest.fixture
def rng(request):
    """A generator seeded from the test's node id, stable across runs."""
    seed = sum(ord(c) for c in request.node.nodeid)
    return np.random.default_rng(seed)


def pytest_collection_modifyitems(config, items):
    """
    Tag every collected test with the marker of the group directory it lives
    in, so `pytest -m "not benchmark"` works without per-file boilerplate.
    """
    for item in items:
        parts = item.nodeid.replace('\\', '/').split('/')
        for group in ('feature', 'realworld', 'benchmark'):
            if group in parts:
                item.add_marker(getattr(pytest.mark, group))
                break
