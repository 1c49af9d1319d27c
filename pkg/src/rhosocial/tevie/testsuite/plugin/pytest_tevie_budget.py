# src/rhosocial/tevie/testsuite/plugin/pytest_tevie_budget.py
"""
Pytest plugin for runtime budget checking.

Tests that assemble large dense matrices, compute full spectra or time FFT
applications declare their expected cost with ``@requires_budget(seconds)``.
This plugin skips such tests when the declared cost exceeds the budget set in
the ``TEVIE_TEST_BUDGET`` environment variable (seconds, default 300, enough for
every bundled test).
"""
import os

import pytest

BUDGET_ENV = 'TEVIE_TEST_BUDGET'
DEFAULT_BUDGET = 300.0


def runtime_budget() -> float:
    """
    Return the per-test runtime budget in seconds.

    An unparsable value falls back to the default rather than failing the
    whole session.
    """
    raw = os.environ.get(BUDGET_ENV)
    if raw is None or not raw.strip():
        return DEFAULT_BUDGET
    try:
        return float(raw)
    except ValueError:
        return DEFAULT_BUDGET


def pytest_configure(config):
    """Configure the plugin."""
    config.addinivalue_line(
        "markers",
        "requires_budget(seconds): skip when the declared runtime exceeds TEVIE_TEST_BUDGET"
    )


@pytest.hookimpl(tryfirst=True)
def pytest_runtest_call(item):
    """
    Hook that runs during test execution to check budget requirements.

    Tests whose ``requires_budget`` marker asks for more seconds than the
    current budget allows are skipped with the test location in the message.
    """
    marker = item.get_closest_marker("requires_budget")
    if marker is None:
        return
    if not marker.args:
        raise ValueError(f"requires_budget needs a number of seconds ({item.nodeid})")
    seconds = float(marker.args[0])
    budget = runtime_budget()
    if seconds > budget:
        pytest.skip(
            f"Needs about {seconds:g}s, budget is {budget:g}s; "
            f"raise {BUDGET_ENV} to run ({item.nodeid})"
        )
