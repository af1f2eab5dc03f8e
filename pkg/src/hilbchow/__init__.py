"""Universal classes for Chow groups of Hilbert schemes of points on surfaces."""

from .surface_algebra import SurfaceClass, SurfaceData, load_surface
from .universal_expr import Stage, UniversalExpr
from .rewrite_engine import nakajima_to_universal
from .oracle import evaluate_n1

__all__ = [
    "SurfaceClass",
    "SurfaceData",
    "Stage",
    "UniversalExpr",
    "evaluate_n1",
    "load_surface",
    "nakajima_to_universal",
]
