# src/rhosocial/tevie/core/__init__.py
from .registry import ProviderRegistry, get_provider_registry, reset_provider_registry

__all__ = ['ProviderRegistry', 'get_provider_registry', 'reset_provider_registry']
