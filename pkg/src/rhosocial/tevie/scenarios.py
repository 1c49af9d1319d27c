# src/rhosocial/tevie/scenarios.py
"""
Built-in scenes and the default provider registry.

All scenes use a normalized background (eps_b = mu_b = 1) and ``k_b h = 0.3``
unless noted; ``size`` sets the number of cells along x1 (default 8).
"""
import logging
from typing import Callable, Dict, List, Optional

import numpy as np

from .core.registry import SCENARIO_PROVIDER, ProviderRegistry
from .errors import ConfigurationError
from .interfaces import IScenarioProvider
from .scene import (AnnulusShape, BackgroundMedium, ContrastMap, DiskShape, Grid2D, Scene,
                    SquareShape, contrast_from_shapes, make_scene)

logger = logging.getLogger('tevie.scenarios')

DEFAULT_SIZE = 8
DEFAULT_KBH = 0.3


def _grid(n1: int, n2: int, h: float) -> Grid2D:
    # centered on the origin
    return Grid2D(origin=(-0.5 * n1 * h, -0.5 * n2 * h), h=h, n1=n1, n2=n2)


def _free_space(n: int, seed: int) -> Scene:
    grid = _grid(n, n, DEFAULT_KBH)
    return make_scene(BackgroundMedium.normalized(1.0), grid, ContrastMap.uniform(grid.n_cells))


def _dielectric_disk(n: int, seed: int) -> Scene:
    grid = _grid(n, n, DEFAULT_KBH)
    disk = DiskShape(radius=0.4 * n * grid.h, chi_e=1.5)
    return make_scene(BackgroundMedium.normalized(1.0), grid,
                      contrast_from_shapes(grid, [disk], passive=True))


def _lossy_annulus(n: int, seed: int) -> Scene:
    grid = _grid(n, n, DEFAULT_KBH)
    extent = 0.5 * n * grid.h
    ring = AnnulusShape(inner_radius=0.3 * extent, outer_radius=0.9 * extent, chi_e=2.0 + 0.5j)
    return make_scene(BackgroundMedium.normalized(1.0), grid,
                      contrast_from_shapes(grid, [ring], passive=True))


def _random_contrast(n: int, seed: int) -> Scene:
    grid = _grid(n, n + 3, DEFAULT_KBH)
    rng = np.random.default_rng(seed)
    size = grid.n_cells
    chi_e = rng.uniform(0.0, 2.0, size) + 1j * rng.uniform(0.0, 0.5, size)
    chi_m = rng.uniform(0.0, 0.5, size) + 1j * rng.uniform(0.0, 0.2, size)
    return make_scene(BackgroundMedium.normalized(1.0), grid,
                      ContrastMap(chi_e=chi_e, chi_m=chi_m, passive=True))


def _magnetic_square(n: int, seed: int) -> Scene:
    grid = _grid(n, n, DEFAULT_KBH)
    square = SquareShape(side=0.6 * n * grid.h, chi_e=0.3, chi_m=0.8)
    # non-normalized medium: exercises the omega, eps_b, mu_b factors separately
    medium = BackgroundMedium(omega=0.5, eps_b=2.0, mu_b=2.0)
    return make_scene(medium, grid, contrast_from_shapes(grid, [square], passive=True))


SCENARIOS: Dict[str, Callable[[int, int], Scene]] = {
    'free_space': _free_space,
    'dielectric_disk': _dielectric_disk,
    'lossy_annulus': _lossy_annulus,
    'random_contrast': _random_contrast,
    'magnetic_square': _magnetic_square,
}


class BuiltinScenarioProvider(IScenarioProvider):
    """Provider for the scenes bundled with the package."""

    def get_test_scenarios(self) -> List[str]:
        return list(SCENARIOS)

    def setup_scene(self, scenario_name: str, seed: int = 0, size: Optional[int] = None) -> Scene:
        try:
            factory = SCENARIOS[scenario_name]
        except KeyError:
            raise ConfigurationError(
                f"unknown scenario {scenario_name!r}; known: {', '.join(SCENARIOS)}"
            ) from None
        n = DEFAULT_SIZE if size is None else int(size)
        if n < 1:
            raise ConfigurationError(f"scenario size must be >= 1, got {size}")
        logger.debug(f"building scenario {scenario_name} (size {n}, seed {seed})")
        return factory(n, seed)

    def cleanup_after_test(self, scenario_name: str):
        # scenes are immutable in-memory values; nothing to release
        pass


provider_registry = ProviderRegistry()
provider_registry.register(SCENARIO_PROVIDER, BuiltinScenarioProvider)


__all__ = ['SCENARIOS', 'BuiltinScenarioProvider', 'provider_registry']
