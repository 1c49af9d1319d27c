# src/rhosocial/tevie/config.py
"""
Scene files and runtime settings.

Scene files are TOML documents::

    [medium]
    omega = 1.0
    eps_b = 1.0
    mu_b = 1.0

    [grid]
    origin = [-4.0, -4.0]
    h = 0.1
    n1 = 80
    n2 = 80

    [[contrast.shapes]]
    shape = "disk"          # disk | annulus | square
    center = [0.0, 0.0]
    radius = 1.0
    chi_e = 1.0             # real number or [re, im]

    [wave]
    direction = [1.0, 0.0]
    amplitude = 1.0

Instead of shapes, ``contrast.raster_e`` / ``contrast.raster_m`` may name CSV
files (relative to the scene file) with one ``re,im`` pair per cell in cell
order. Optional sections: ``[solver]`` (tol, maxit, restart, preconditioner,
operator) and ``[validation]`` (threshold).

Every error raised while reading a scene file is a ``ConfigurationError``
carrying the line number of the offending entry when it can be located.
"""
import logging
import os
import re
import sys
from pathlib import Path
from typing import Annotated, Any, Dict, List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .errors import ConfigurationError
from .scene import (AnnulusShape, BackgroundMedium, ContrastMap, DiskShape, Grid2D, PlaneWaveTE,
                    Scene, SquareShape, contrast_from_shapes, make_scene)

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

logger = logging.getLogger('tevie.config')

THREADS_ENV = 'TEVIE_THREADS'


def parse_complex(value: Any) -> complex:
    """Accept a number, a ``[re, im]`` pair or a Python complex literal string."""
    if isinstance(value, bool):
        raise ValueError("boolean is not a complex number")
    if isinstance(value, (int, float, complex)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        re_part, im_part = value
        if any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in value):
            raise ValueError(f"complex pair must hold two numbers, got {value!r}")
        return complex(float(re_part), float(im_part))
    if isinstance(value, str):
        try:
            return complex(value.replace(' ', ''))
        except ValueError:
            pass
    raise ValueError(f"expected a number or [re, im], got {value!r}")


class _Section(BaseModel):
    model_config = ConfigDict(extra='forbid', frozen=True)


class MediumSection(_Section):
    omega: float = Field(..., gt=0)
    eps_b: float = Field(1.0, gt=0)
    mu_b: float = Field(1.0, gt=0)


class GridSection(_Section):
    origin: Tuple[float, float] = (0.0, 0.0)
    h: float = Field(..., gt=0)
    n1: int = Field(..., ge=1)
    n2: int = Field(..., ge=1)


class _ShapeEntry(_Section):
    chi_e: complex = 0j
    chi_m: complex = 0j

    @field_validator('chi_e', 'chi_m', mode='before')
    @classmethod
    def _complex(cls, value: Any) -> complex:
        return parse_complex(value)


class DiskEntry(_ShapeEntry):
    shape: Literal['disk']
    center: Tuple[float, float] = (0.0, 0.0)
    radius: float = Field(..., gt=0)

    def to_shape(self) -> DiskShape:
        return DiskShape(center=self.center, radius=self.radius, chi_e=self.chi_e,
                         chi_m=self.chi_m)


class AnnulusEntry(_ShapeEntry):
    shape: Literal['annulus']
    center: Tuple[float, float] = (0.0, 0.0)
    inner_radius: float = Field(..., ge=0)
    outer_radius: float = Field(..., gt=0)

    def to_shape(self) -> AnnulusShape:
        return AnnulusShape(center=self.center, inner_radius=self.inner_radius,
                            outer_radius=self.outer_radius, chi_e=self.chi_e, chi_m=self.chi_m)


class SquareEntry(_ShapeEntry):
    shape: Literal['square']
    center: Tuple[float, float] = (0.0, 0.0)
    side: float = Field(..., gt=0)

    def to_shape(self) -> SquareShape:
        return SquareShape(center=self.center, side=self.side, chi_e=self.chi_e,
                           chi_m=self.chi_m)


ShapeEntry = Annotated[Union[DiskEntry, AnnulusEntry, SquareEntry], Field(discriminator='shape')]
_SHAPE_TAGS = ('disk', 'annulus', 'square')


class ContrastSection(_Section):
    passive: bool = False
    shapes: List[ShapeEntry] = Field(default_factory=list)
    raster_e: Optional[str] = None
    raster_m: Optional[str] = None

    @model_validator(mode='after')
    def _one_source(self) -> "ContrastSection":
        if self.shapes and (self.raster_e or self.raster_m):
            raise ValueError("use either shapes or rasters, not both")
        return self


class WaveSection(_Section):
    direction: Tuple[float, float] = (1.0, 0.0)
    amplitude: complex = 1.0 + 0j

    @field_validator('amplitude', mode='before')
    @classmethod
    def _complex(cls, value: Any) -> complex:
        return parse_complex(value)

    @field_validator('direction')
    @classmethod
    def _normalize(cls, value: Tuple[float, float]) -> Tuple[float, float]:
        norm = float(np.hypot(*value))
        if norm == 0.0:
            raise ValueError("direction must be nonzero")
        return (value[0] / norm, value[1] / norm)


class SolverSection(_Section):
    tol: Optional[float] = Field(None, gt=0, lt=1)
    maxit: Optional[int] = Field(None, ge=1)
    restart: Optional[int] = Field(None, ge=1)
    preconditioner: Optional[Literal['none', 'symbol_diagonal']] = None
    operator: Literal['fast', 'dense'] = 'fast'


class ValidationSection(_Section):
    threshold: float = Field(0.05, ge=0)


class SceneConfig(_Section):
    """Validated scene file."""

    medium: MediumSection
    grid: GridSection
    contrast: ContrastSection = Field(default_factory=ContrastSection)
    wave: WaveSection = Field(default_factory=WaveSection)
    solver: SolverSection = Field(default_factory=SolverSection)
    validation: ValidationSection = Field(default_factory=ValidationSection)

    # set by the loader, not part of the file
    base_dir: Optional[str] = Field(None, exclude=True)
    source: Optional[str] = Field(None, exclude=True)

    def build_medium(self) -> BackgroundMedium:
        return BackgroundMedium(omega=self.medium.omega, eps_b=self.medium.eps_b,
                                mu_b=self.medium.mu_b)

    def build_grid(self) -> Grid2D:
        return Grid2D(origin=self.grid.origin, h=self.grid.h, n1=self.grid.n1, n2=self.grid.n2)

    def build_contrast(self) -> ContrastMap:
        grid = self.build_grid()
        section = self.contrast
        if section.raster_e or section.raster_m:
            zeros = np.zeros(grid.n_cells, dtype=complex)
            chi_e = self._raster(section.raster_e, grid.n_cells) if section.raster_e else zeros
            chi_m = self._raster(section.raster_m, grid.n_cells) if section.raster_m else zeros
            return ContrastMap(chi_e=chi_e, chi_m=chi_m, passive=section.passive)
        return contrast_from_shapes(grid, [s.to_shape() for s in section.shapes],
                                    passive=section.passive)

    def _raster(self, name: str, n_cells: int) -> np.ndarray:
        path = Path(name)
        if not path.is_absolute() and self.base_dir is not None:
            path = Path(self.base_dir) / path
        return read_contrast_raster(path, n_cells)

    def build_scene(self) -> Scene:
        return make_scene(self.build_medium(), self.build_grid(), self.build_contrast())

    def build_wave(self) -> PlaneWaveTE:
        return PlaneWaveTE(direction=self.wave.direction, amplitude_h3=self.wave.amplitude)

    def solver_overrides(self) -> Dict[str, Any]:
        """Non-default solver settings from the file, keyed like ``SolverConfig``."""
        mapping = {'tol': 'rel_tolerance', 'maxit': 'max_iterations', 'restart': 'restart',
                   'preconditioner': 'preconditioner'}
        return {mapping[k]: v for k, v in self.solver.model_dump().items()
                if k in mapping and v is not None}

    def cylinder(self):
        """The single-disk, non-magnetic scatterer this file describes.

        Raises ``ConfigurationError`` for any other contrast layout.
        """
        from .oracle import CylinderSpec

        shapes = self.contrast.shapes
        if (len(shapes) != 1 or not isinstance(shapes[0], DiskEntry)
                or self.contrast.raster_e or self.contrast.raster_m):
            raise ConfigurationError("validation needs exactly one disk shape",
                                     source=self.source)
        disk = shapes[0]
        if disk.chi_m != 0:
            raise ConfigurationError("validation needs chi_m = 0 inside the disk",
                                     source=self.source)
        return CylinderSpec(radius=disk.radius, chi_e_inside=disk.chi_e, center=disk.center)


def read_contrast_raster(path: Union[str, Path], n_cells: int) -> np.ndarray:
    """Read ``re,im`` lines (blank lines and ``#`` comments ignored)."""
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as e:
        raise ConfigurationError(f"cannot read contrast raster: {e.strerror}",
                                 source=str(path)) from None
    values: List[complex] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        parts = line.split(',')
        if len(parts) != 2:
            raise ConfigurationError(f"expected 're,im', got {raw.strip()!r}",
                                     line=lineno, source=str(path))
        try:
            value = complex(float(parts[0]), float(parts[1]))
        except ValueError:
            raise ConfigurationError(f"not a number pair: {raw.strip()!r}",
                                     line=lineno, source=str(path)) from None
        if not np.isfinite(value):
            raise ConfigurationError("non-finite contrast value", line=lineno, source=str(path))
        values.append(value)
    if len(values) != n_cells:
        raise ConfigurationError(f"raster has {len(values)} values, grid has {n_cells} cells",
                                 source=str(path))
    return np.asarray(values, dtype=complex)


_HEADER = re.compile(r'^\[(\[)?\s*([A-Za-z0-9_.\s"-]+?)\s*\](\])?$')
_KEY = re.compile(r'^([A-Za-z0-9_-]+)\s*=')


def locate_line(text: str, loc: Sequence[Union[str, int]]) -> Optional[int]:
    """Best-effort line number of a pydantic error location in TOML source.

    Returns the line of the key itself, else the header of its table, else None.
    """
    names: List[str] = []
    index: Optional[int] = None
    previous_int = False
    for item in loc:
        if isinstance(item, int):
            index = item
            previous_int = True
            continue
        if previous_int and item in _SHAPE_TAGS:
            previous_int = False
            continue
        previous_int = False
        names.append(item)
    if not names:
        return None

    table: List[str] = []
    occurrence: Dict[str, int] = {}
    current_index: Optional[int] = None
    header_line: Optional[int] = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split('#', 1)[0].strip()
        header = _HEADER.match(line)
        if header:
            table = [part.strip().strip('"') for part in header.group(2).split('.')]
            current_index = None
            if header.group(1):
                dotted = '.'.join(table)
                occurrence[dotted] = occurrence.get(dotted, -1) + 1
                current_index = occurrence[dotted]
            if header_line is None and table in (names, names[:-1]) and (
                    index is None or current_index in (None, index)):
                header_line = lineno
            continue
        key = _KEY.match(line)
        if key and table + [key.group(1)] == names and (index is None or current_index == index):
            return lineno
    return header_line


def parse_scene_config(text: str, source: Optional[str] = None,
                       base_dir: Optional[str] = None) -> SceneConfig:
    """Parse and validate scene-file text."""
    try:
        document = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        line = getattr(e, 'lineno', None)
        if line is None:
            found = re.search(r'line (\d+)', str(e))
            line = int(found.group(1)) if found else None
        raise ConfigurationError(f"TOML syntax error: {e}", line=line, source=source) from None
    try:
        config = SceneConfig.model_validate(document)
    except ValidationError as e:
        first = e.errors()[0]
        where = '.'.join(str(p) for p in first['loc'])
        raise ConfigurationError(f"{where}: {first['msg']}", line=locate_line(text, first['loc']),
                                 source=source) from None
    return config.model_copy(update={'base_dir': base_dir, 'source': source})


def load_scene_config(path: Union[str, Path]) -> SceneConfig:
    """Read a scene file from disk."""
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as e:
        raise ConfigurationError(f"cannot read scene file: {e.strerror or e}",
                                 source=str(path)) from None
    logger.debug(f"loading scene file {path}")
    return parse_scene_config(text, source=str(path), base_dir=str(path.parent))


def runtime_threads() -> Optional[int]:
    """Parallelism cap from ``TEVIE_THREADS``; None means no cap."""
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw.strip() == '':
        return None
    try:
        threads = int(raw)
    except ValueError:
        raise ConfigurationError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if threads < 1:
        raise ConfigurationError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return threads


__all__ = [
    'THREADS_ENV',
    'SceneConfig',
    'MediumSection',
    'GridSection',
    'ContrastSection',
    'WaveSection',
    'SolverSection',
    'ValidationSection',
    'parse_complex',
    'parse_scene_config',
    'load_scene_config',
    'read_contrast_raster',
    'locate_line',
    'runtime_threads',
]
