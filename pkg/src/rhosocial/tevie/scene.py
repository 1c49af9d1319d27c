# src/rhosocial/tevie/scene.py
"""
The physical problem: background medium, uniform grid, contrast maps and the
incident TE plane wave.

Unit and ordering conventions owned by this module:

- time dependence ``exp(-i * omega * t)``;
- cell ``(i, j)`` with ``0 <= i < n1`` along x1 and ``0 <= j < n2`` along x2 has
  flat index ``n = i * n2 + j`` and center ``origin + ((i + 1/2) h, (j + 1/2) h)``;
- field vectors are stored in block order ``[E1 | E2 | H3]``, each block of
  length ``N = n1 * n2`` in cell order.

All models are frozen; arrays held by them are flagged read-only.
"""
import logging
import math
from typing import Iterable, Literal, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .errors import ConfigurationError, DomainError

logger = logging.getLogger('tevie.scene')

# Recommended upper bound on k_b * h (at least ten cells per wavelength).
KBH_RECOMMENDED_MAX = math.pi / 5


def _readonly(values: np.ndarray) -> np.ndarray:
    values.setflags(write=False)
    return values


class BackgroundMedium(BaseModel):
    """Lossless homogeneous background."""

    model_config = ConfigDict(frozen=True)

    omega: float = Field(..., gt=0, description="angular frequency (rad/s)")
    eps_b: float = Field(..., gt=0, description="permittivity (F/m)")
    mu_b: float = Field(..., gt=0, description="permeability (H/m)")

    @field_validator('omega', 'eps_b', 'mu_b')
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("must be finite")
        return value

    @property
    def k_b(self) -> float:
        """Background wavenumber omega * sqrt(eps_b * mu_b)."""
        return self.omega * math.sqrt(self.eps_b * self.mu_b)

    @property
    def impedance(self) -> float:
        """Wave impedance sqrt(mu_b / eps_b)."""
        return math.sqrt(self.mu_b / self.eps_b)

    @classmethod
    def normalized(cls, k_b: float) -> "BackgroundMedium":
        """Medium with eps_b = mu_b = 1 and the requested wavenumber."""
        return cls(omega=k_b, eps_b=1.0, mu_b=1.0)


class Grid2D(BaseModel):
    """Uniform square-cell grid."""

    model_config = ConfigDict(frozen=True)

    origin: Tuple[float, float] = (0.0, 0.0)
    h: float = Field(..., gt=0)
    n1: int = Field(..., ge=1)
    n2: int = Field(..., ge=1)

    @property
    def n_cells(self) -> int:
        return self.n1 * self.n2

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.n1, self.n2)

    @property
    def lag_shape(self) -> Tuple[int, int]:
        """Shape of the circular embedding used by the FFT operator."""
        return (2 * self.n1, 2 * self.n2)

    @property
    def extent(self) -> Tuple[float, float, float, float]:
        """(x1_min, x1_max, x2_min, x2_max) of the covered rectangle."""
        x0, y0 = self.origin
        return (x0, x0 + self.n1 * self.h, y0, y0 + self.n2 * self.h)

    def centers(self) -> np.ndarray:
        """Cell centers as an (N, 2) array in cell order."""
        i = (np.arange(self.n1) + 0.5) * self.h + self.origin[0]
        j = (np.arange(self.n2) + 0.5) * self.h + self.origin[1]
        x1, x2 = np.meshgrid(i, j, indexing='ij')
        return np.stack([x1.ravel(), x2.ravel()], axis=-1)

    @classmethod
    def covering(cls, x_min: float, x_max: float, y_min: float, y_max: float,
                 h: float) -> "Grid2D":
        """Smallest grid of step h covering the rectangle, centered on it."""
        n1 = max(1, math.ceil((x_max - x_min) / h - 1e-12))
        n2 = max(1, math.ceil((y_max - y_min) / h - 1e-12))
        cx, cy = 0.5 * (x_min + x_max), 0.5 * (y_min + y_max)
        return cls(origin=(cx - 0.5 * n1 * h, cy - 0.5 * n2 * h), h=h, n1=n1, n2=n2)

    @classmethod
    def centered(cls, center: Tuple[float, float], half_width: float, h: float) -> "Grid2D":
        """Square grid with ``center`` on a cell corner and an even cell count per side.

        The origin lies ``ceil(half_width / h)`` cells from ``center`` along each
        axis. With a half-width that is a multiple of the coarsest step, the
        grids for ``h``, ``h / 2``, ... share their origin and every coarse
        cell splits into four finer ones.
        """
        if half_width <= 0:
            raise DomainError(f"half_width must be positive, got {half_width!r}")
        half = max(1, math.ceil(half_width / h - 1e-9))
        return cls(origin=(center[0] - half * h, center[1] - half * h), h=h,
                   n1=2 * half, n2=2 * half)


class ContrastMap(BaseModel):
    """Per-cell complex electric and magnetic contrasts.

    ``passive`` declares the map non-gaining; with the ``exp(-i omega t)``
    convention that means non-negative imaginary parts.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    chi_e: np.ndarray
    chi_m: np.ndarray
    passive: bool = False

    @field_validator('chi_e', 'chi_m', mode='before')
    @classmethod
    def _as_complex(cls, value) -> np.ndarray:
        try:
            values = np.array(value, dtype=complex).ravel()
        except (TypeError, ValueError) as e:
            raise ConfigurationError(f"contrast values must be complex numbers: {e}") from None
        if not np.all(np.isfinite(values)):
            raise ConfigurationError("contrast values must be finite")
        return _readonly(values)

    @model_validator(mode='after')
    def _check(self) -> "ContrastMap":
        if self.chi_e.shape != self.chi_m.shape:
            raise ConfigurationError(
                f"chi_e and chi_m sizes differ: {self.chi_e.size} vs {self.chi_m.size}"
            )
        if self.passive and (np.any(self.chi_e.imag < 0) or np.any(self.chi_m.imag < 0)):
            raise ConfigurationError("passive contrast requires Im(chi) >= 0")
        return self

    @property
    def size(self) -> int:
        return int(self.chi_e.size)

    @classmethod
    def uniform(cls, n_cells: int, chi_e: complex = 0.0, chi_m: complex = 0.0,
                passive: bool = False) -> "ContrastMap":
        return cls(chi_e=np.full(n_cells, chi_e, dtype=complex),
                   chi_m=np.full(n_cells, chi_m, dtype=complex), passive=passive)

    def is_zero(self) -> bool:
        return not (np.any(self.chi_e) or np.any(self.chi_m))

    def permuted(self, order: np.ndarray) -> "ContrastMap":
        return ContrastMap(chi_e=self.chi_e[order], chi_m=self.chi_m[order],
                           passive=self.passive)


class FieldVector:
    """Complex (E1, E2, H3) per cell, flattened as ``[E1 | E2 | H3]``.

    The wrapper is thin: ``np.asarray(field)`` returns the underlying buffer.
    """

    __slots__ = ('data', 'n_cells')

    def __init__(self, data, n_cells: Optional[int] = None):
        values = np.asarray(data, dtype=complex).ravel()
        if n_cells is None:
            if values.size % 3:
                raise DomainError(
                    f"field vector length {values.size} is not a multiple of 3"
                )
            n_cells = values.size // 3
        if values.size != 3 * n_cells:
            raise DomainError(
                f"field vector length {values.size} does not match 3N = {3 * n_cells}"
            )
        self.data = values
        self.n_cells = n_cells

    @classmethod
    def from_components(cls, e1, e2, h3) -> "FieldVector":
        e1, e2, h3 = (np.asarray(c, dtype=complex).ravel() for c in (e1, e2, h3))
        if not e1.size == e2.size == h3.size:
            raise DomainError("field components must have equal length")
        return cls(np.concatenate([e1, e2, h3]), e1.size)

    @classmethod
    def zeros(cls, n_cells: int) -> "FieldVector":
        return cls(np.zeros(3 * n_cells, dtype=complex), n_cells)

    @property
    def e1(self) -> np.ndarray:
        return self.data[:self.n_cells]

    @property
    def e2(self) -> np.ndarray:
        return self.data[self.n_cells:2 * self.n_cells]

    @property
    def h3(self) -> np.ndarray:
        return self.data[2 * self.n_cells:]

    def __len__(self) -> int:
        return self.data.size

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.data
        return self.data.astype(dtype)

    def __sub__(self, other) -> "FieldVector":
        return FieldVector(self.data - np.asarray(other), self.n_cells)

    def __repr__(self) -> str:
        return f"FieldVector(n_cells={self.n_cells})"


class PlaneWaveTE(BaseModel):
    """TE plane wave with out-of-plane magnetic field amplitude ``amplitude_h3``."""

    model_config = ConfigDict(frozen=True)

    direction: Tuple[float, float] = (1.0, 0.0)
    amplitude_h3: complex = 1.0 + 0.0j

    @field_validator('direction')
    @classmethod
    def _unit(cls, value: Tuple[float, float]) -> Tuple[float, float]:
        if abs(math.hypot(*value) - 1.0) > 1e-14:
            raise ValueError(f"direction must be a unit vector, |d| = {math.hypot(*value)!r}")
        return value

    @classmethod
    def from_angle(cls, angle: float, amplitude_h3: complex = 1.0) -> "PlaneWaveTE":
        return cls(direction=(math.cos(angle), math.sin(angle)), amplitude_h3=amplitude_h3)

    @property
    def angle(self) -> float:
        return math.atan2(self.direction[1], self.direction[0])

    def evaluate(self, medium: BackgroundMedium,
                 points: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(E1, E2, H3) of the wave at arbitrary points of shape (..., 2).

        E = Z * H3 * (-d2, d1) with Z the background impedance, which is the
        source-free solution of -i w eps E1 = d2 H3, -i w eps E2 = -d1 H3.
        """
        x = np.asarray(points, dtype=float)
        d1, d2 = self.direction
        h3 = self.amplitude_h3 * np.exp(1j * medium.k_b * (d1 * x[..., 0] + d2 * x[..., 1]))
        z = medium.impedance
        return -d2 * z * h3, d1 * z * h3, h3


class Scene(BaseModel):
    """Immutable aggregate of medium, grid and contrast."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    medium: BackgroundMedium
    grid: Grid2D
    contrast: ContrastMap

    @model_validator(mode='after')
    def _contrast_matches_grid(self) -> "Scene":
        if self.contrast.size != self.grid.n_cells:
            raise ConfigurationError(
                f"contrast arrays have {self.contrast.size} values, grid has "
                f"{self.grid.n1}x{self.grid.n2} = {self.grid.n_cells} cells"
            )
        return self

    @property
    def n_cells(self) -> int:
        return self.grid.n_cells

    @property
    def kbh(self) -> float:
        return self.medium.k_b * self.grid.h


def make_scene(medium: BackgroundMedium, grid: Grid2D, contrast: ContrastMap) -> Scene:
    """Validate and bundle the parts of a problem."""
    scene = Scene(medium=medium, grid=grid, contrast=contrast)
    if scene.kbh > KBH_RECOMMENDED_MAX:
        logger.warning(
            f"k_b*h = {scene.kbh:.4g} exceeds the recommended {KBH_RECOMMENDED_MAX:.4g} "
            f"(fewer than 10 cells per wavelength)"
        )
    else:
        logger.debug(f"scene {grid.n1}x{grid.n2}, k_b*h = {scene.kbh:.4g}")
    return scene


def incident_fields(wave: PlaneWaveTE, scene: Scene) -> FieldVector:
    """Incident (E1, E2, H3) sampled at the cell centers."""
    e1, e2, h3 = wave.evaluate(scene.medium, scene.grid.centers())
    return FieldVector.from_components(e1, e2, h3)


# ============================================================================
# Contrast rasterisation (cell-center sampling)
# ============================================================================

class DiskShape(BaseModel):
    model_config = ConfigDict(frozen=True)

    shape: Literal['disk'] = 'disk'
    center: Tuple[float, float] = (0.0, 0.0)
    radius: float = Field(..., gt=0)
    chi_e: complex = 0.0
    chi_m: complex = 0.0

    def mask(self, points: np.ndarray) -> np.ndarray:
        r = np.hypot(points[:, 0] - self.center[0], points[:, 1] - self.center[1])
        return r < self.radius


class AnnulusShape(BaseModel):
    model_config = ConfigDict(frozen=True)

    shape: Literal['annulus'] = 'annulus'
    center: Tuple[float, float] = (0.0, 0.0)
    inner_radius: float = Field(..., ge=0)
    outer_radius: float = Field(..., gt=0)
    chi_e: complex = 0.0
    chi_m: complex = 0.0

    @model_validator(mode='after')
    def _radii(self) -> "AnnulusShape":
        if self.inner_radius >= self.outer_radius:
            raise ValueError("inner_radius must be smaller than outer_radius")
        return self

    def mask(self, points: np.ndarray) -> np.ndarray:
        r = np.hypot(points[:, 0] - self.center[0], points[:, 1] - self.center[1])
        return (r >= self.inner_radius) & (r < self.outer_radius)


class SquareShape(BaseModel):
    model_config = ConfigDict(frozen=True)

    shape: Literal['square'] = 'square'
    center: Tuple[float, float] = (0.0, 0.0)
    side: float = Field(..., gt=0)
    chi_e: complex = 0.0
    chi_m: complex = 0.0

    def mask(self, points: np.ndarray) -> np.ndarray:
        half = 0.5 * self.side
        return ((np.abs(points[:, 0] - self.center[0]) < half)
                & (np.abs(points[:, 1] - self.center[1]) < half))


Shape = Union[DiskShape, AnnulusShape, SquareShape]


def contrast_from_shapes(grid: Grid2D, shapes: Iterable[Shape],
                         passive: bool = False) -> ContrastMap:
    """Sample analytic shapes at the cell centers; later shapes win on overlap."""
    points = grid.centers()
    chi_e = np.zeros(grid.n_cells, dtype=complex)
    chi_m = np.zeros(grid.n_cells, dtype=complex)
    for shape in shapes:
        inside = shape.mask(points)
        chi_e[inside] = shape.chi_e
        chi_m[inside] = shape.chi_m
    return ContrastMap(chi_e=chi_e, chi_m=chi_m, passive=passive)


def scene_from_arrays(k_b: float, h: float, chi_e: Sequence, chi_m: Optional[Sequence] = None,
                      n1: Optional[int] = None, n2: Optional[int] = None,
                      origin: Tuple[float, float] = (0.0, 0.0)) -> Scene:
    """Shortcut for normalized media (eps_b = mu_b = 1) used by tests and scenarios."""
    chi_e = np.asarray(chi_e, dtype=complex)
    if n1 is None or n2 is None:
        if chi_e.ndim != 2:
            raise ConfigurationError("grid shape required for flat contrast arrays")
        n1, n2 = chi_e.shape
    chi_m = np.zeros(chi_e.size, dtype=complex) if chi_m is None else chi_m
    return make_scene(BackgroundMedium.normalized(k_b),
                      Grid2D(origin=origin, h=h, n1=n1, n2=n2),
                      ContrastMap(chi_e=chi_e, chi_m=chi_m))


__all__ = [
    'KBH_RECOMMENDED_MAX',
    'BackgroundMedium',
    'Grid2D',
    'ContrastMap',
    'FieldVector',
    'PlaneWaveTE',
    'Scene',
    'make_scene',
    'incident_fields',
    'DiskShape',
    'AnnulusShape',
    'SquareShape',
    'Shape',
    'contrast_from_shapes',
    'scene_from_arrays',
]
