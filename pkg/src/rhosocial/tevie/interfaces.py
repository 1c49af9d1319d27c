# src/rhosocial/tevie/interfaces.py
"""
This file defines the contract a scenario provider must satisfy.

The bundled test suite, the self-check and the benchmarks never build scenes
themselves; they ask the registered provider for named scenes. A downstream
project can point ``TEVIE_SCENARIO_REGISTRY`` at its own registry and run the
same checks against its own geometries.
"""
from abc import ABC, abstractmethod
from typing import List, Optional

from .scene import PlaneWaveTE, Scene


class IScenarioProvider(ABC):
    """
    The interface for providers of named test scenes.
    """

    @abstractmethod
    def get_test_scenarios(self) -> List[str]:
        """
        Should return the names of the scenes this provider can build
        (e.g., ['free_space', 'dielectric_disk']).
        """
        pass

    @abstractmethod
    def setup_scene(self, scenario_name: str, seed: int = 0, size: Optional[int] = None) -> Scene:
        """
        Should build the scene for ``scenario_name``. ``seed`` fixes any random
        contrast; ``size`` overrides the number of cells along x1.
        """
        pass

    def incident_wave(self, scenario_name: str) -> PlaneWaveTE:
        """
        The plane wave used with the scene; unit H3 amplitude along +x1 unless
        a provider says otherwise.
        """
        return PlaneWaveTE()

    @abstractmethod
    def cleanup_after_test(self, scenario_name: str):
        """
        Should release anything ``setup_scene`` acquired.
        """
        pass


__all__ = ['IScenarioProvider']
