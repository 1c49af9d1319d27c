# src/rhosocial/tevie/testsuite/feature/budget/test_budget.py
"""Tests for the runtime budget plugin."""
import pytest

from rhosocial.tevie.testsuite.plugin.pytest_tevie_budget import (BUDGET_ENV, DEFAULT_BUDGET,
                                                                  runtime_budget)

# Declared by the realworld cylinder acceptance run, the slowest bundled test.
CYLINDER_RUN_SECONDS = 300


def test_default_budget_runs_acceptance_tests(monkeypatch):
    monkeypatch.delenv(BUDGET_ENV, raising=False)
    assert runtime_budget() == DEFAULT_BUDGET
    assert runtime_budget() >= CYLINDER_RUN_SECONDS


@pytest.mark.parametrize("raw, expected", [
    ("60", 60.0),
    (" 12.5 ", 12.5),
    ("", DEFAULT_BUDGET),
    ("soon", DEFAULT_BUDGET),
])
def test_budget_from_environment(monkeypatch, raw, expected):
    monkeypatch.setenv(BUDGET_ENV, raw)
    assert runtime_budget() == expected
