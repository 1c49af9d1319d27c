# src/rhosocial/tevie/testsuite/feature/cli/conftest.py
"""
Fixtures for the "cli" feature tests.

`scene_file` writes a small TOML scene (an 8x8 grid holding one disk) and
returns its path; the disk contrast and any trailing TOML are parameters.
Every test also gets the `tevie` logger back in its original state.
"""
import logging
import textwrap

import pytest


SCENE_TEMPLATE = textwrap.dedent("""\
    [medium]
    omega = 1.0

    [grid]
    origin = [-1.2, -1.2]
    h = 0.3
    n1 = 8
    n2 = 8

    [[contrast.shapes]]
    shape = "disk"
    radius = 0.9
    chi_e = {chi_e}

    [solver]
    tol = 1e-9
""")


@pytest.fixture(autouse=True)
def restore_tevie_logger():
    """``main`` installs a stderr handler; drop it so captured streams are not reused."""
    logger = logging.getLogger('tevie')
    handlers, level = list(logger.handlers), logger.level
    yield
    logger.handlers[:] = handlers
    logger.setLevel(level)


@pytest.fixture
def scene_file(tmp_path):
    def write(chi_e='1.5', extra=''):
        path = tmp_path / "scene.toml"
        path.write_text(SCENE_TEMPLATE.format(chi_e=chi_e) + extra, encoding='utf-8')
        return path
    return write
