"""
Geometry Class Factory
Singleton registry of reduction classes keyed by geometry kind

© 2025-2030 All rights reserved Ashutosh Sinha
email: ajsinha@gmail.com
"""

from typing import Any, Dict, Optional, Type
import logging

from .exceptions import UnsupportedGeometry
from .geometry_class import GeometryClass


class GeometryFactory:
    """
    Singleton factory for geometry class instances.

    The built-in classes (radial_af, homogeneous) are registered on first
    use; further classes can be added with register_geometry.
    """

    _instance = None
    _geometry_registry: Dict[str, Type[GeometryClass]] = {}
    _geometry_instances: Dict[str, GeometryClass] = {}

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(GeometryFactory, cls).__new__(cls)
            cls._instance._initialized = False
        return cls._instance

    def __init__(self):
        """Initialize the factory (only once)."""
        if not self._initialized:
            self.logger = logging.getLogger(__name__)
            self._initialized = True
            self._register_builtin_geometries()

    def _register_builtin_geometries(self):
        from ..geometries.radial_geometry import RadialGeometry
        from ..geometries.homogeneous_geometry import HomogeneousGeometry

        for kind, geometry_class in (('radial_af', RadialGeometry),
                                     ('homogeneous', HomogeneousGeometry)):
            if kind not in self._geometry_registry:
                self.register_geometry(kind, geometry_class)

    def register_geometry(self, geometry_kind: str, geometry_class: Type[GeometryClass]):
        """
        Register a geometry class.

        Args:
            geometry_kind: Unique name for the class
            geometry_class: GeometryClass subclass to register
        """
        self._geometry_registry[geometry_kind.lower()] = geometry_class
        self._geometry_instances.pop(geometry_kind.lower(), None)
        self.logger.debug(f"Registered geometry class: {geometry_kind}")

    def get_geometry(self, geometry_kind: Any) -> GeometryClass:
        """
        Get the (cached) geometry class instance for a kind.

        Raises:
            UnsupportedGeometry: If the kind is not registered
        """
        key = str(getattr(geometry_kind, 'value', geometry_kind)).lower()
        if key in self._geometry_instances:
            return self._geometry_instances[key]
        if key not in self._geometry_registry:
            raise UnsupportedGeometry(
                f"Geometry '{key}' not registered. "
                f"Available geometries: {list(self._geometry_registry.keys())}"
            )
        instance = self._geometry_registry[key](key)
        self._geometry_instances[key] = instance
        return instance

    def for_metric(self, metric: Any) -> GeometryClass:
        """
        Geometry class that accepts the given metric.

        Raises:
            UnsupportedGeometry: If no registered class accepts it
        """
        for key in self._geometry_registry:
            geometry = self.get_geometry(key)
            if geometry.accepts(metric):
                return geometry
        raise UnsupportedGeometry(f"No geometry class accepts {type(metric).__name__}")

    def get_available_geometries(self) -> list:
        return list(self._geometry_registry.keys())

    def is_geometry_registered(self, geometry_kind: str) -> bool:
        return geometry_kind.lower() in self._geometry_registry

    def clear_cache(self, geometry_kind: Optional[str] = None):
        if geometry_kind:
            self._geometry_instances.pop(geometry_kind.lower(), None)
        else:
            self._geometry_instances.clear()

    def __repr__(self) -> str:
        return f"<GeometryFactory(geometries={len(self._geometry_registry)})>"


def geometry_for(metric: Any) -> GeometryClass:
    return GeometryFactory().for_metric(metric)
