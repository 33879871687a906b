"""Mori chamber decomposition for varieties of Picard number two."""

from .cone2 import ClassVec, Cone2, Ray, cone_hull, normalize
from .engine import DecompositionReport, run_decomposition
from .model import Scenario, load_scenario, save_scenario, validate

__all__ = [
    "ClassVec", "Cone2", "Ray", "cone_hull", "normalize",
    "DecompositionReport", "run_decomposition",
    "Scenario", "load_scenario", "save_scenario", "validate",
]
__version__ = "0.1.0"
