# src/rhosocial/tevie/core/registry.py
"""
This file defines how scene providers are looked up. A `ProviderRegistry` maps
an interface name to a concrete provider class; the process-wide registry is
the built-in one unless `TEVIE_SCENARIO_REGISTRY` names another.
"""
import os
import importlib
from typing import Optional, Type, Dict

REGISTRY_ENV = 'TEVIE_SCENARIO_REGISTRY'
DEFAULT_REGISTRY = 'rhosocial.tevie.scenarios:provider_registry'

# Interface name under which the scene provider is registered.
SCENARIO_PROVIDER = 'IScenarioProvider'


class ProviderRegistry:
    """
    A simple registry that maps an interface name to a provider class
    implementing it.
    """

    def __init__(self):
        self._providers: Dict[str, Type] = {}

    def register(self, interface_path: str, provider_class: Type) -> None:
        """Registers a provider class for a given interface name."""
        self._providers[interface_path] = provider_class

    def get_provider(self, interface_path: str) -> Optional[Type]:
        """Retrieves a provider class for a given interface name."""
        return self._providers.get(interface_path)


_registry_instance: Optional[ProviderRegistry] = None


def get_provider_registry() -> ProviderRegistry:
    """
    Finds and returns the scene provider registry.

    The import path comes from the `TEVIE_SCENARIO_REGISTRY` environment
    variable (e.g. 'my_project.scenes:provider_registry'); without it the
    built-in registry of `rhosocial.tevie.scenarios` is used.
    """
    global _registry_instance
    if _registry_instance:
        return _registry_instance

    registry_path = os.environ.get(REGISTRY_ENV) or DEFAULT_REGISTRY
    try:
        module_path, obj_name = registry_path.rsplit(':', 1)
        module = importlib.import_module(module_path)
        _registry_instance = getattr(module, obj_name)
        return _registry_instance
    except (ImportError, AttributeError, ValueError) as e:
        raise RuntimeError(f"Failed to load ProviderRegistry from '{registry_path}': {e}")


def reset_provider_registry() -> None:
    """Forget the cached registry so the next lookup reads the environment again."""
    global _registry_instance
    _registry_instance = None
