# src/rhosocial/tevie/artifacts.py
"""
Writers for the files a run leaves in its output directory.

Numbers are written with ``%.17g`` so that a value read back parses to the same
double. CSV bodies carry no timestamps; two identical runs produce identical
files.
"""
import csv
import json
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence, Tuple, Union

import numpy as np

from .scene import FieldVector, Grid2D

PathLike = Union[str, Path]

FIELD_NAMES = ('E1', 'E2', 'H3')


def fmt(value: float) -> str:
    return '%.17g' % float(value)


def _writer(fh) -> Any:
    return csv.writer(fh, lineterminator='\n')


def write_field_raster(path: PathLike, grid: Grid2D, values: np.ndarray) -> None:
    """One field component on the grid: grid header, then ``i,j,re,im`` rows."""
    data = np.asarray(values, dtype=complex).reshape(grid.shape)
    with open(path, 'w', newline='', encoding='utf-8') as fh:
        writer = _writer(fh)
        writer.writerow(['n1', 'n2', 'h', 'origin1', 'origin2'])
        writer.writerow([grid.n1, grid.n2, fmt(grid.h), fmt(grid.origin[0]), fmt(grid.origin[1])])
        writer.writerow(['i', 'j', 're', 'im'])
        for i in range(grid.n1):
            for j in range(grid.n2):
                z = data[i, j]
                writer.writerow([i, j, fmt(z.real), fmt(z.imag)])


def write_field_vector(directory: PathLike, prefix: str, grid: Grid2D, field: FieldVector) -> None:
    """``<prefix>_E1.csv``, ``<prefix>_E2.csv`` and ``<prefix>_H3.csv``."""
    directory = Path(directory)
    for name, values in zip(FIELD_NAMES, (field.e1, field.e2, field.h3)):
        write_field_raster(directory / f"{prefix}_{name}.csv", grid, values)


def read_field_raster(path: PathLike) -> Tuple[Grid2D, np.ndarray]:
    """Inverse of ``write_field_raster``; returns the grid and an (n1, n2) array."""
    with open(path, newline='', encoding='utf-8') as fh:
        rows = list(csv.reader(fh))
    n1, n2 = int(rows[1][0]), int(rows[1][1])
    grid = Grid2D(origin=(float(rows[1][3]), float(rows[1][4])), h=float(rows[1][2]),
                  n1=n1, n2=n2)
    data = np.zeros((n1, n2), dtype=complex)
    for row in rows[3:]:
        data[int(row[0]), int(row[1])] = complex(float(row[2]), float(row[3]))
    return grid, data


def write_spectrum(path: PathLike, eigenvalues: Iterable[complex],
                   predicted: Iterable[complex]) -> None:
    with open(path, 'w', newline='', encoding='utf-8') as fh:
        writer = _writer(fh)
        writer.writerow(['re', 'im', 'label'])
        for z in eigenvalues:
            writer.writerow([fmt(z.real), fmt(z.imag), 'matrix_eig'])
        for z in predicted:
            writer.writerow([fmt(z.real), fmt(z.imag), 'symbol_point'])


def write_field_comparison(path: PathLike, points: np.ndarray,
                           numerical: Mapping[str, np.ndarray],
                           reference: Mapping[str, np.ndarray]) -> None:
    """Rows ``x1,x2,field,re_num,im_num,re_ref,im_ref`` point by point."""
    with open(path, 'w', newline='', encoding='utf-8') as fh:
        writer = _writer(fh)
        writer.writerow(['x1', 'x2', 'field', 're_num', 'im_num', 're_ref', 'im_ref'])
        for k, (x1, x2) in enumerate(points):
            for name in FIELD_NAMES:
                if name not in numerical:
                    continue
                num, ref = numerical[name][k], reference[name][k]
                writer.writerow([fmt(x1), fmt(x2), name, fmt(num.real), fmt(num.imag),
                                 fmt(ref.real), fmt(ref.imag)])


def write_rows(path: PathLike, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    with open(path, 'w', newline='', encoding='utf-8') as fh:
        writer = _writer(fh)
        writer.writerow(list(header))
        for row in rows:
            writer.writerow([fmt(v) if isinstance(v, float) else v for v in row])


def _jsonable(value: Any) -> Any:
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, np.generic):
        return _jsonable(value.item())
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, Mapping):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def write_json(path: PathLike, payload: Mapping[str, Any]) -> None:
    with open(path, 'w', encoding='utf-8') as fh:
        json.dump(_jsonable(payload), fh, indent=2, sort_keys=True)
        fh.write('\n')


__all__ = [
    'FIELD_NAMES',
    'fmt',
    'write_field_raster',
    'write_field_vector',
    'read_field_raster',
    'write_spectrum',
    'write_field_comparison',
    'write_rows',
    'write_json',
]
