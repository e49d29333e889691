"""MCCA variants and their registry."""

from rmcca.methods.registry import MethodRegistry, get_method, list_methods, registry

__all__ = [
    "MethodRegistry",
    "get_method",
    "list_methods",
    "registry",
]
