# src/rhosocial/tevie/testsuite/feature/artifacts/test_artifacts.py
"""Tests for the CSV and JSON writers."""
import csv
import json

import numpy as np
import pytest

from rhosocial.tevie import artifacts
from rhosocial.tevie.scene import FieldVector, Grid2D


@pytest.fixture
def grid():
    return Grid2D(origin=(-0.3, 0.1), h=0.1, n1=3, n2=4)


def _rows(path):
    with open(path, newline='', encoding='utf-8') as fh:
        return list(csv.reader(fh))


def test_fmt_round_trips_doubles():
    for value in (0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23):
        assert float(artifacts.fmt(value)) == value


def test_field_raster_layout_and_read_back(tmp_path, grid, rng):
    values = rng.standard_normal(grid.n_cells) + 1j * rng.standard_normal(grid.n_cells)
    path = tmp_path / "field.csv"
    artifacts.write_field_raster(path, grid, values)

    rows = _rows(path)
    assert rows[0] == ['n1', 'n2', 'h', 'origin1', 'origin2']
    assert rows[2] == ['i', 'j', 're', 'im']
    assert len(rows) == 3 + grid.n_cells
    assert rows[4][:2] == ['0', '1']

    read_grid, data = artifacts.read_field_raster(path)
    assert read_grid == grid
    np.testing.assert_array_equal(data.ravel(), values)


def test_field_vector_writes_three_components(tmp_path, grid):
    field = FieldVector.from_components(np.ones(12), 2 * np.ones(12), 3j * np.ones(12))
    artifacts.write_field_vector(tmp_path, 'total', grid, field)
    for index, name in enumerate(artifacts.FIELD_NAMES):
        _, data = artifacts.read_field_raster(tmp_path / f"total_{name}.csv")
        expected = [1.0, 2.0, 3j][index]
        assert np.all(data == expected)


def test_spectrum_labels(tmp_path):
    path = tmp_path / "spectrum.csv"
    artifacts.write_spectrum(path, np.array([1.0 + 0.5j, 2.0 - 1e-3j]), [1.0 + 0j])
    rows = _rows(path)
    assert rows[0] == ['re', 'im', 'label']
    assert [r[2] for r in rows[1:]] == ['matrix_eig', 'matrix_eig', 'symbol_point']
    assert float(rows[2][1]) == -1e-3


def test_field_comparison_skips_missing_components(tmp_path):
    points = np.array([[0.0, 1.0], [2.0, 3.0]])
    numerical = {'E1': np.array([1j, 2j]), 'H3': np.array([1.0, 2.0])}
    reference = {'E1': np.array([1j, 2.5j]), 'H3': np.array([1.0, 2.0])}
    path = tmp_path / "comparison.csv"
    artifacts.write_field_comparison(path, points, numerical, reference)
    rows = _rows(path)
    assert rows[0] == ['x1', 'x2', 'field', 're_num', 'im_num', 're_ref', 'im_ref']
    assert [r[2] for r in rows[1:]] == ['E1', 'H3', 'E1', 'H3']
    assert float(rows[3][6]) == 2.5


def test_rows_format_floats_only(tmp_path):
    path = tmp_path / "rows.csv"
    artifacts.write_rows(path, ['name', 'value', 'count'], [('a', 0.1, 3)])
    assert _rows(path) == [['name', 'value', 'count'], ['a', '0.10000000000000001', '3']]


def test_json_complex_and_numpy_values(tmp_path):
    path = tmp_path / "report.json"
    artifacts.write_json(path, {
        'zeta': 1.0 - 2.0j,
        'alpha': np.float64(0.5),
        'values': np.array([1j, 2.0]),
        'nested': {'point': (0.25 + 0j)},
    })
    text = path.read_text(encoding='utf-8')
    assert text.endswith('\n')
    assert text.index('"alpha"') < text.index('"nested"') < text.index('"zeta"')
    payload = json.loads(text)
    assert payload['zeta'] == [1.0, -2.0]
    assert payload['alpha'] == 0.5
    assert payload['values'] == [[0.0, 1.0], [2.0, 0.0]]
    assert payload['nested'] == {'point': [0.25, 0.0]}


def test_writers_are_deterministic(tmp_path, grid):
    values = np.linspace(0.0, 1.0, grid.n_cells) * (1.0 - 1.0j)
    artifacts.write_field_raster(tmp_path / "a.csv", grid, values)
    artifacts.write_field_raster(tmp_path / "b.csv", grid, values)
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
