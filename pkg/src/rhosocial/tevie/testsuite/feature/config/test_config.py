# src/rhosocial/tevie/testsuite/feature/config/test_config.py
"""Tests for scene files, contrast rasters and runtime settings."""
import textwrap

import numpy as np
import pytest

from rhosocial.tevie.config import (THREADS_ENV, load_scene_config, parse_complex,
                                    parse_scene_config, read_contrast_raster, runtime_threads)
from rhosocial.tevie.errors import ConfigurationError
from rhosocial.tevie.oracle import CylinderSpec

SCENE = textwrap.dedent("""\
    [medium]
    omega = 1.0
    eps_b = 1.0
    mu_b = 1.0

    [grid]
    origin = [-1.0, -1.0]
    h = 0.25
    n1 = 8
    n2 = 8

    [[contrast.shapes]]
    shape = "disk"
    center = [0.0, 0.0]
    radius = 0.6
    chi_e = [1.0, 0.25]

    [wave]
    direction = [3.0, 4.0]
    amplitude = 2.0

    [solver]
    tol = 1e-6
    restart = 20
""")


def _line_of(text, needle):
    for lineno, line in enumerate(text.splitlines(), 1):
        if needle in line:
            return lineno
    raise AssertionError(needle)


def test_parse_and_build_scene():
    config = parse_scene_config(SCENE)
    scene = config.build_scene()
    assert scene.n_cells == 64
    assert scene.kbh == pytest.approx(0.25)
    assert np.count_nonzero(scene.contrast.chi_e) > 0
    assert set(np.unique(scene.contrast.chi_e)) <= {0j, 1.0 + 0.25j}
    wave = config.build_wave()
    assert wave.direction == pytest.approx((0.6, 0.8))
    assert wave.amplitude_h3 == 2.0


def test_solver_overrides_use_solver_config_names():
    config = parse_scene_config(SCENE)
    assert config.solver_overrides() == {'rel_tolerance': 1e-6, 'restart': 20}
    assert config.solver.operator == 'fast'
    assert config.validation.threshold == pytest.approx(0.05)


def test_cylinder_from_single_disk():
    spec = parse_scene_config(SCENE).cylinder()
    assert isinstance(spec, CylinderSpec)
    assert spec.radius == pytest.approx(0.6)
    assert spec.chi_e_inside == 1.0 + 0.25j


def test_cylinder_rejects_other_layouts():
    text = SCENE.replace('[wave]', textwrap.dedent("""\
        [[contrast.shapes]]
        shape = "square"
        side = 0.2
        chi_e = 1.0

        [wave]"""))
    with pytest.raises(ConfigurationError):
        parse_scene_config(text).cylinder()


def test_syntax_error_cites_line():
    text = SCENE.replace('n2 = 8', 'n2 = = 8')
    with pytest.raises(ConfigurationError) as excinfo:
        parse_scene_config(text, source='scene.toml')
    assert excinfo.value.line == _line_of(text, 'n2 = = 8')
    assert 'scene.toml' in str(excinfo.value)


def test_validation_error_cites_line_of_key():
    text = SCENE.replace('h = 0.25', 'h = -0.25')
    with pytest.raises(ConfigurationError) as excinfo:
        parse_scene_config(text)
    assert excinfo.value.line == _line_of(text, 'h = -0.25')
    assert 'grid.h' in excinfo.value.message


def test_shape_error_cites_line_inside_array_table():
    text = SCENE.replace('radius = 0.6', 'radius = -0.6')
    with pytest.raises(ConfigurationError) as excinfo:
        parse_scene_config(text)
    assert excinfo.value.line == _line_of(text, 'radius = -0.6')


def test_unknown_key_is_rejected():
    text = SCENE.replace('mu_b = 1.0', 'mu_b = 1.0\nsigma = 2.0')
    with pytest.raises(ConfigurationError) as excinfo:
        parse_scene_config(text)
    assert excinfo.value.line == _line_of(text, 'sigma')


def test_unknown_shape_is_rejected():
    with pytest.raises(ConfigurationError):
        parse_scene_config(SCENE.replace('shape = "disk"', 'shape = "hexagon"'))


@pytest.mark.parametrize("value,expected", [
    (1, 1 + 0j),
    (2.5, 2.5 + 0j),
    ([1.0, -2.0], 1.0 - 2.0j),
    ("1+2j", 1 + 2j),
])
def test_parse_complex(value, expected):
    assert parse_complex(value) == expected


@pytest.mark.parametrize("value", [True, [1.0], ["a", 1.0], "nope", None])
def test_parse_complex_rejects(value):
    with pytest.raises(ValueError):
        parse_complex(value)


def _raster_scene(raster_line):
    return SCENE.replace(textwrap.dedent("""\
        [[contrast.shapes]]
        shape = "disk"
        center = [0.0, 0.0]
        radius = 0.6
        chi_e = [1.0, 0.25]
        """), f"[contrast]\n{raster_line}\n")


def test_raster_contrast_relative_to_scene_file(tmp_path):
    values = [(0.1 * k, 0.01 * k) for k in range(64)]
    lines = ["# per-cell chi_e"] + [f"{re!r},{im!r}" for re, im in values]
    (tmp_path / "chi_e.csv").write_text("\n".join(lines) + "\n", encoding='utf-8')
    scene_file = tmp_path / "scene.toml"
    scene_file.write_text(_raster_scene('raster_e = "chi_e.csv"'), encoding='utf-8')

    scene = load_scene_config(scene_file).build_scene()
    assert scene.contrast.chi_e[5] == complex(*values[5])
    assert scene.contrast.is_zero() is False
    assert np.all(scene.contrast.chi_m == 0)


def test_raster_bad_line_cites_line(tmp_path):
    path = tmp_path / "raster.csv"
    path.write_text("1.0,0.0\n\n2.0;0.0\n", encoding='utf-8')
    with pytest.raises(ConfigurationError) as excinfo:
        read_contrast_raster(path, 2)
    assert excinfo.value.line == 3


def test_raster_wrong_count(tmp_path):
    path = tmp_path / "raster.csv"
    path.write_text("1.0,0.0\n2.0,0.0\n", encoding='utf-8')
    with pytest.raises(ConfigurationError):
        read_contrast_raster(path, 3)


def test_shapes_and_raster_are_exclusive():
    text = SCENE.replace('[[contrast.shapes]]', '[contrast]\nraster_e = "x.csv"\n\n'
                         '[[contrast.shapes]]')
    with pytest.raises(ConfigurationError):
        parse_scene_config(text)


def test_missing_scene_file(tmp_path):
    with pytest.raises(ConfigurationError):
        load_scene_config(tmp_path / "absent.toml")


def test_runtime_threads(monkeypatch):
    monkeypatch.delenv(THREADS_ENV, raising=False)
    assert runtime_threads() is None
    monkeypatch.setenv(THREADS_ENV, "4")
    assert runtime_threads() == 4
    for bad in ("0", "-2", "many"):
        monkeypatch.setenv(THREADS_ENV, bad)
        with pytest.raises(ConfigurationError):
            runtime_threads()
