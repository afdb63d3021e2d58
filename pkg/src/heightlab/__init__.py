"""Exact and Monte Carlo study of random height functions on tori."""

__version__ = "0.1.0"

from .heights import (HOM, LIP, BoundaryCondition, HeightFunction, make_bc,
                      range_of, validate)
from .torus import TorusSpec, build_torus

__all__ = [
    "HOM", "LIP", "BoundaryCondition", "HeightFunction", "TorusSpec",
    "build_torus", "make_bc", "range_of", "validate", "__version__",
]
