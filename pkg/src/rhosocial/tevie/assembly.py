# src/rhosocial/tevie/assembly.py
"""
Dense collocation matrix of the coupled (E1, E2, H3) system.

Row ``p * N + n`` holds equation ``p`` (0: E1, 1: E2, 2: H3) collocated at cell
``n``; column ``q * N + m`` multiplies unknown ``q`` at cell ``m``. Off-diagonal
entries (m != n) are::

    [A_ll]_nm = -k^2 h^2 chi_e(x_m) {[(i/(2kr)) H1 - (i/4) H0] t_l t_l
                                     + [(i/4) H0 - (i/(4kr)) H1]}
    [A_lq]_nm = -k^2 h^2 chi_e(x_m) [(i/(2kr)) H1 - (i/4) H0] t_l t_q
    [A_13]_nm =  i w mu  h^2 chi_m(x_m) (ik/4) H1 t_2
    [A_23]_nm = -i w mu  h^2 chi_m(x_m) (ik/4) H1 t_1
    [A_31]_nm =  i w eps h^2 chi_e(x_m) (ik/4) H1 t_2
    [A_32]_nm = -i w eps h^2 chi_e(x_m) (ik/4) H1 t_1
    [A_33]_nm = -k^2 h^2 chi_m(x_m) (i/4) H0

with ``r = |x_n - x_m|`` and ``t = (x_n - x_m) / r``. The sums run over every
other cell of the grid. Diagonal entries come from integrating the kernel over
the disk of radius ``h / sqrt(pi)`` (same area as the cell); the cross blocks
have no self contribution.

The matrix is stored column-major (Fortran order) and flagged read-only.
"""
import logging
import math
import os
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Optional, Tuple, Union

import numpy as np

from .config import runtime_threads
from .errors import ConfigurationError, DomainError, ResourceError
from .scene import FieldVector, PlaneWaveTE, Scene, incident_fields
from .specfun import hankel1

logger = logging.getLogger('tevie.assembly')

DEFAULT_MEMORY_BUDGET = 4 * 1024 ** 3
MATRIX_MAGIC = b"TEVIE\0"
MATRIX_VERSION = 1
_HEADER = struct.Struct('<6sIQ')

# Target number of complex entries per block and row chunk.
_CHUNK_ENTRIES = 1 << 17

_SQRT_PI = math.sqrt(math.pi)


def _check_positive(k_b: float, h: float) -> None:
    if not (math.isfinite(k_b) and k_b > 0 and math.isfinite(h) and h > 0):
        raise DomainError(f"k_b and h must be positive, got k_b={k_b!r}, h={h!r}")


def self_term(k_b: float, h: float) -> complex:
    """Principal-value integral of ``A_11`` over the equal-area disk.

    ``-1/2 + (i pi a k_b / 4) H1(k_b a)`` with ``a = h / sqrt(pi)``; tends to 0
    as ``k_b h -> 0``.
    """
    _check_positive(k_b, h)
    a = h / _SQRT_PI
    return complex(-0.5 + 0.25j * math.pi * a * k_b * hankel1(1, k_b * a))


def electric_bracket(k_b: float, h: float) -> complex:
    """Diagonal factor of chi_e in the E rows.

    ``1 - (i pi k h / (4 sqrt(pi))) H1(k h / sqrt(pi))``
    """
    _check_positive(k_b, h)
    z = k_b * h / _SQRT_PI
    return complex(1.0 - (1j * math.pi * k_b * h / (4.0 * _SQRT_PI)) * hankel1(1, z))


def magnetic_bracket(k_b: float, h: float) -> complex:
    """Diagonal factor of chi_m in the H3 rows.

    ``1 - (i pi k h / (2 sqrt(pi))) H1(k h / sqrt(pi))``
    """
    _check_positive(k_b, h)
    z = k_b * h / _SQRT_PI
    return complex(1.0 - (1j * math.pi * k_b * h / (2.0 * _SQRT_PI)) * hankel1(1, z))


@dataclass(frozen=True)
class SelfTermConstants:
    """Equal-area radius and self-term value of one grid cell."""

    a_n: float
    l_diag: complex

    @classmethod
    def for_cell(cls, k_b: float, h: float) -> "SelfTermConstants":
        return cls(a_n=h / _SQRT_PI, l_diag=self_term(k_b, h))


def diagonal_entries(scene: Scene) -> Tuple[np.ndarray, np.ndarray]:
    """Diagonals ``(D_E, D_H)`` of the E blocks and of the H3 block."""
    k, h = scene.medium.k_b, scene.grid.h
    d_e = 1.0 + electric_bracket(k, h) * scene.contrast.chi_e
    d_h = 1.0 + magnetic_bracket(k, h) * scene.contrast.chi_m
    return d_e, d_h


@dataclass(frozen=True)
class DenseSystemMatrix:
    """The assembled 3N x 3N matrix together with the scene it discretizes."""

    matrix: np.ndarray
    scene: Scene

    @property
    def n_cells(self) -> int:
        return self.scene.n_cells

    @property
    def shape(self) -> Tuple[int, int]:
        return self.matrix.shape

    def block(self, p: int, q: int) -> np.ndarray:
        n = self.n_cells
        return self.matrix[p * n:(p + 1) * n, q * n:(q + 1) * n]

    def matvec(self, u) -> np.ndarray:
        return self.matrix @ np.asarray(u, dtype=complex)

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)


def dense_bytes(n_cells: int) -> int:
    """Storage of the dense complex128 matrix for ``n_cells`` cells."""
    return (3 * n_cells) ** 2 * 16


def _chunks(n_cells: int) -> Iterator[slice]:
    size = max(1, min(n_cells, _CHUNK_ENTRIES // max(n_cells, 1)))
    for start in range(0, n_cells, size):
        yield slice(start, min(start + size, n_cells))


def _threads(threads: Optional[int]) -> int:
    if threads is None:
        threads = runtime_threads()
    return max(1, threads if threads is not None else (os.cpu_count() or 1))


def _row_blocks(scene: Scene, rows: slice, centers: np.ndarray,
                diagonals: Tuple[np.ndarray, np.ndarray]) -> np.ndarray:
    """All nine blocks restricted to collocation cells ``rows``: shape (3, 3, c, N)."""
    medium, grid, contrast = scene.medium, scene.grid, scene.contrast
    k, h2 = medium.k_b, grid.h ** 2
    n_cells = grid.n_cells
    rows_idx = np.arange(rows.start, rows.stop)

    d = centers[rows, None, :] - centers[None, :, :]
    r = np.hypot(d[..., 0], d[..., 1])
    self_cell = rows_idx[:, None] == np.arange(n_cells)[None, :]
    r = np.where(self_cell, 1.0, r)
    t1 = d[..., 0] / r
    t2 = d[..., 1] / r
    z = k * r
    h0 = hankel1(0, z)
    h1 = hankel1(1, z)

    f = 0.5j * h1 / z - 0.25j * h0
    g = 0.25j * h0 - 0.25j * h1 / z
    c = 0.25j * k * h1
    chi_e = contrast.chi_e[None, :]
    chi_m = contrast.chi_m[None, :]
    pref_e = -k ** 2 * h2 * chi_e
    wmu = 1j * medium.omega * medium.mu_b * h2 * chi_m
    weps = 1j * medium.omega * medium.eps_b * h2 * chi_e

    blocks = np.empty((3, 3) + r.shape, dtype=complex)
    blocks[0, 0] = pref_e * (f * t1 * t1 + g)
    blocks[1, 1] = pref_e * (f * t2 * t2 + g)
    blocks[0, 1] = pref_e * (f * t1 * t2)
    blocks[1, 0] = pref_e * (f * t2 * t1)
    blocks[0, 2] = wmu * c * t2
    blocks[1, 2] = -wmu * c * t1
    blocks[2, 0] = weps * c * t2
    blocks[2, 1] = -weps * c * t1
    blocks[2, 2] = -k ** 2 * h2 * chi_m * (0.25j * h0)

    local, cell = np.nonzero(self_cell)
    blocks[:, :, local, cell] = 0.0
    d_e, d_h = diagonals
    blocks[0, 0, local, cell] = d_e[cell]
    blocks[1, 1, local, cell] = d_e[cell]
    blocks[2, 2, local, cell] = d_h[cell]
    return blocks


def assemble_dense(scene: Scene, budget_bytes: int = DEFAULT_MEMORY_BUDGET,
                   threads: Optional[int] = None) -> DenseSystemMatrix:
    """Build the full matrix, in row chunks spread over a thread pool."""
    n = scene.n_cells
    required = dense_bytes(n)
    if required > budget_bytes:
        raise ResourceError(
            f"dense {3 * n}x{3 * n} matrix does not fit the memory budget; "
            f"use the FFT operator or a coarser grid",
            required=required, budget=budget_bytes,
        )
    workers = _threads(threads)
    logger.info(f"assembling dense {3 * n}x{3 * n} matrix ({required / 2 ** 20:.1f} MiB) "
                f"with {workers} thread(s)")
    matrix = np.empty((3 * n, 3 * n), dtype=complex, order='F')
    centers = scene.grid.centers()
    diagonals = diagonal_entries(scene)

    def fill(rows: slice) -> None:
        blocks = _row_blocks(scene, rows, centers, diagonals)
        for p in range(3):
            for q in range(3):
                matrix[p * n + rows.start:p * n + rows.stop, q * n:(q + 1) * n] = blocks[p, q]

    with ThreadPoolExecutor(max_workers=workers) as pool:
        list(pool.map(fill, _chunks(n)))
    matrix.setflags(write=False)
    return DenseSystemMatrix(matrix=matrix, scene=scene)


def dense_matvec(scene: Scene, u, threads: Optional[int] = None) -> np.ndarray:
    """``A @ u`` from freshly computed matrix rows, without storing the matrix."""
    n = scene.n_cells
    vec = np.asarray(u, dtype=complex).ravel()
    if vec.size != 3 * n:
        raise DomainError(f"vector length {vec.size} does not match 3N = {3 * n}")
    parts = vec.reshape(3, n)
    out = np.zeros((3, n), dtype=complex)
    centers = scene.grid.centers()
    diagonals = diagonal_entries(scene)

    def rows_product(rows: slice) -> None:
        blocks = _row_blocks(scene, rows, centers, diagonals)
        for p in range(3):
            out[p, rows] = sum(blocks[p, q] @ parts[q] for q in range(3))

    with ThreadPoolExecutor(max_workers=_threads(threads)) as pool:
        list(pool.map(rows_product, _chunks(n)))
    return out.ravel()


def assemble_rhs(scene: Scene, wave: PlaneWaveTE) -> FieldVector:
    """Right-hand side: the incident field at the cell centers."""
    return incident_fields(wave, scene)


def dump_matrix(matrix: Union[DenseSystemMatrix, np.ndarray], path: Union[str, Path]) -> None:
    """Write the binary matrix dump (header, then column-major complex128 LE)."""
    values = np.asarray(matrix)
    size = values.shape[0]
    if values.ndim != 2 or values.shape[1] != size or size % 3:
        raise DomainError(f"expected a square 3N x 3N matrix, got shape {values.shape}")
    with open(path, 'wb') as fh:
        fh.write(_HEADER.pack(MATRIX_MAGIC, MATRIX_VERSION, size // 3))
        fh.write(np.asarray(values, dtype='<c16').tobytes(order='F'))


def load_matrix(path: Union[str, Path]) -> np.ndarray:
    """Read a matrix written by ``dump_matrix``."""
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise ConfigurationError("matrix dump is truncated", source=str(path))
    magic, version, n_cells = _HEADER.unpack_from(data)
    if magic != MATRIX_MAGIC:
        raise ConfigurationError(f"bad matrix dump magic {magic!r}", source=str(path))
    if version != MATRIX_VERSION:
        raise ConfigurationError(f"unsupported matrix dump version {version}", source=str(path))
    size = 3 * n_cells
    body = data[_HEADER.size:]
    if len(body) != size * size * 16:
        raise ConfigurationError(
            f"matrix dump body has {len(body)} bytes, expected {size * size * 16}",
            source=str(path),
        )
    return np.frombuffer(body, dtype='<c16').reshape((size, size), order='F').astype(complex)


__all__ = [
    'DEFAULT_MEMORY_BUDGET',
    'MATRIX_MAGIC',
    'MATRIX_VERSION',
    'self_term',
    'electric_bracket',
    'magnetic_bracket',
    'SelfTermConstants',
    'diagonal_entries',
    'DenseSystemMatrix',
    'dense_bytes',
    'assemble_dense',
    'dense_matvec',
    'assemble_rhs',
    'dump_matrix',
    'load_matrix',
]
