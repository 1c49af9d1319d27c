# src/rhosocial/tevie/testsuite/utils.py
"""
Utility functions for the testsuite package.

This module provides:
1. The ``requires_budget`` decorator for marking expensive tests
2. Access to the registered scenario provider
3. Small numerical helpers shared by the feature and realworld groups

All tests across the testsuite should import these helpers from this module.
"""
from typing import Optional

import numpy as np
import pytest

from rhosocial.tevie.core.registry import SCENARIO_PROVIDER, get_provider_registry
from rhosocial.tevie.interfaces import IScenarioProvider
from rhosocial.tevie.scene import BackgroundMedium, ContrastMap, Grid2D, Scene, make_scene


# ============================================================================
# Budget Decorators
# ============================================================================

def requires_budget(seconds: float):
    """
    Mark a test as needing roughly ``seconds`` of wall time.

    The ``pytest_tevie_budget`` plugin skips the test when the budget from
    ``TEVIE_TEST_BUDGET`` is smaller.

    Example:
        @requires_budget(30)
        def test_full_spectrum(...):
            ...
    """
    return pytest.mark.requires_budget(seconds)


# ============================================================================
# Provider Access Functions
# ============================================================================

def get_scenario_provider() -> Optional[IScenarioProvider]:
    """
    Instantiate the registered scenario provider.

    Returns:
        The provider instance, or None when no provider is registered.
    """
    provider_class = get_provider_registry().get_provider(SCENARIO_PROVIDER)
    if not provider_class:
        return None
    return provider_class()


def get_scenarios():
    """Scenario names of the registered provider; empty when there is none."""
    provider = get_scenario_provider()
    return provider.get_test_scenarios() if provider is not None else []


def scenario_params():
    """
    Scenario names for fixture parameterization.

    If no scenarios are found, a single dummy parameter makes the dependent
    tests skip with a helpful message.
    """
    scenarios = get_scenarios()
    if scenarios:
        return scenarios
    return [pytest.param("default", marks=pytest.mark.skip(reason="No tevie scenarios found"))]


# ============================================================================
# Numerical Helpers
# ============================================================================

def relative_error(actual, expected) -> float:
    """``||actual - expected|| / ||expected||`` in the 2-norm."""
    actual = np.asarray(actual)
    expected = np.asarray(expected)
    return float(np.linalg.norm(actual - expected) / np.linalg.norm(expected))


def random_vector(rng: np.random.Generator, size: int) -> np.ndarray:
    return rng.standard_normal(size) + 1j * rng.standard_normal(size)


def random_contrast_scene(rng: np.random.Generator, n1: int, n2: int, kbh: float = 0.3,
                          magnetic: bool = True) -> Scene:
    """A passive random-contrast scene on a grid centered on the origin."""
    grid = Grid2D(origin=(-0.5 * n1 * kbh, -0.5 * n2 * kbh), h=kbh, n1=n1, n2=n2)
    size = grid.n_cells
    chi_e = rng.uniform(0.0, 2.0, size) + 1j * rng.uniform(0.0, 0.5, size)
    chi_m = np.zeros(size, dtype=complex)
    if magnetic:
        chi_m = rng.uniform(0.0, 0.5, size) + 1j * rng.uniform(0.0, 0.2, size)
    return make_scene(BackgroundMedium.normalized(1.0), grid,
                      ContrastMap(chi_e=chi_e, chi_m=chi_m, passive=True))


__all__ = [
    'requires_budget',
    'get_scenario_provider',
    'get_scenarios',
    'scenario_params',
    'relative_error',
    'random_vector',
    'random_contrast_scene',
]
