# src/rhosocial/tevie/fastop.py
"""
Matrix-free application of the collocation matrix.

Each off-diagonal block is a two-level Toeplitz matrix in the cell lags
``(i_n - i_m, j_n - j_m)``. Embedding the lag table in a ``(2 n1, 2 n2)``
circulant turns every block-vector product into one FFT convolution:
``y = ifft2(T_hat * fft2(chi * u))`` cropped to the first ``n1 x n2`` entries.
Lag 0 is left out of the tables; the diagonal is added from
``assembly.diagonal_entries`` so both paths share the same self terms.
"""
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy import fft
from scipy.sparse.linalg import LinearOperator

from . import kernels
from .assembly import diagonal_entries
from .config import runtime_threads
from .errors import ConfigurationError, DomainError
from .scene import Scene

logger = logging.getLogger('tevie.fastop')


@dataclass(frozen=True)
class ToeplitzTables:
    """Spectra of the six distinct lag tables plus the diagonal corrections.

    ``t12`` serves both (1,2) and (2,1). ``b13`` and ``b23`` are the spectra of
    ``h^2 B`` and are signed with ``-i w mu`` or ``-i w eps`` when applied.
    """

    t11: np.ndarray
    t12: np.ndarray
    t22: np.ndarray
    b13: np.ndarray
    b23: np.ndarray
    t33: np.ndarray
    d_e: np.ndarray
    d_h: np.ndarray

    @property
    def shape(self) -> Tuple[int, int]:
        return self.t11.shape


def _lag_samples(scene: Scene) -> Tuple[np.ndarray, Tuple[np.ndarray, np.ndarray]]:
    """Displacements of all nonzero lags and where they go in the padded table."""
    grid = scene.grid
    n1, n2 = grid.n1, grid.n2
    a = np.rint(fft.fftfreq(2 * n1, 1.0 / (2 * n1))).astype(int)
    b = np.rint(fft.fftfreq(2 * n2, 1.0 / (2 * n2))).astype(int)
    la, lb = np.meshgrid(a, b, indexing='ij')
    used = (np.abs(la) < n1) & (np.abs(lb) < n2) & ((la != 0) | (lb != 0))
    index = np.nonzero(used)
    d = np.stack([la[index] * grid.h, lb[index] * grid.h], axis=-1).astype(float)
    return d, index


def build_tables(scene: Scene, workers: Optional[int] = None) -> ToeplitzTables:
    grid, medium = scene.grid, scene.medium
    k, h2 = medium.k_b, grid.h ** 2
    shape = grid.lag_shape
    d, index = _lag_samples(scene)

    names = ('t11', 't12', 't22', 'b13', 'b23', 't33')
    raw = {name: np.zeros(shape, dtype=complex) for name in names}
    if d.size:
        disp = kernels.Displacement.of(d)
        a = kernels.tensor_a(disp, k)
        b = kernels.tensor_b(disp, k)
        raw['t11'][index] = -h2 * a[:, 0, 0]
        raw['t12'][index] = -h2 * a[:, 0, 1]
        raw['t22'][index] = -h2 * a[:, 1, 1]
        raw['b13'][index] = h2 * b[:, 0, 2]
        raw['b23'][index] = h2 * b[:, 1, 2]
        raw['t33'][index] = -k ** 2 * h2 * kernels.green(disp.r, k)

    spectra = {name: fft.fft2(table, workers=workers) for name, table in raw.items()}
    d_e, d_h = diagonal_entries(scene)
    return ToeplitzTables(d_e=d_e.reshape(grid.shape), d_h=d_h.reshape(grid.shape), **spectra)


@dataclass(frozen=True)
class OperatorHandle:
    """Matrix-free 3N x 3N operator of a scene; safe to share between threads."""

    scene: Scene
    tables: ToeplitzTables
    workers: Optional[int] = None

    @property
    def shape(self) -> Tuple[int, int]:
        size = 3 * self.scene.n_cells
        return (size, size)

    def matvec(self, u) -> np.ndarray:
        return apply(self, u)

    def __matmul__(self, u) -> np.ndarray:
        return apply(self, u)

    def as_linear_operator(self) -> LinearOperator:
        return LinearOperator(self.shape, matvec=self.matvec, dtype=complex)


def build_operator(scene: Scene, workers: Optional[int] = None) -> OperatorHandle:
    """Precompute the lag tables of ``scene``.

    ``workers`` is passed to ``scipy.fft``; by default it follows
    ``TEVIE_THREADS`` and otherwise uses every core.
    """
    if scene.n_cells == 0:
        raise ConfigurationError("cannot build an operator on an empty grid")
    if workers is None:
        workers = runtime_threads() or -1
    logger.debug(f"building FFT tables {scene.grid.lag_shape} with workers={workers}")
    return OperatorHandle(scene=scene, tables=build_tables(scene, workers), workers=workers)


def apply(op: OperatorHandle, u) -> np.ndarray:
    """``A @ u`` in O(N log N)."""
    scene, tab = op.scene, op.tables
    grid, medium = scene.grid, scene.medium
    n1, n2 = grid.shape
    vec = np.asarray(u, dtype=complex).ravel()
    if vec.size != 3 * grid.n_cells:
        raise DomainError(f"vector length {vec.size} does not match 3N = {3 * grid.n_cells}")
    u1, u2, u3 = vec.reshape(3, n1, n2)
    chi_e = scene.contrast.chi_e.reshape(n1, n2)
    chi_m = scene.contrast.chi_m.reshape(n1, n2)
    padded = tab.shape

    def spectrum(values: np.ndarray) -> np.ndarray:
        return fft.fft2(values, s=padded, workers=op.workers)

    def crop(values: np.ndarray) -> np.ndarray:
        return fft.ifft2(values, workers=op.workers)[:n1, :n2]

    v1, v2, vh = spectrum(chi_e * u1), spectrum(chi_e * u2), spectrum(chi_m * u3)
    wmu = 1j * medium.omega * medium.mu_b
    weps = 1j * medium.omega * medium.eps_b

    y1 = tab.d_e * u1 + crop(tab.t11 * v1 + tab.t12 * v2 - wmu * tab.b13 * vh)
    y2 = tab.d_e * u2 + crop(tab.t12 * v1 + tab.t22 * v2 - wmu * tab.b23 * vh)
    y3 = tab.d_h * u3 + crop(-weps * (tab.b13 * v1 + tab.b23 * v2) + tab.t33 * vh)
    return np.concatenate([y1.ravel(), y2.ravel(), y3.ravel()])


__all__ = ['ToeplitzTables', 'OperatorHandle', 'build_tables', 'build_operator', 'apply']
