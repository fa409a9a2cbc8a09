"""Bloch-mode field quantization in a 1-D periodic dielectric."""

from .assembly import Method, assemble
from .constants import SI, PhysicalConstants
from .mesh import Mesh1D, PermittivityProfile, build_mesh
from .modes import ModeBasis, solve_modes
from .quantize import QuantizedField

__all__ = [
    "Method",
    "assemble",
    "SI",
    "PhysicalConstants",
    "Mesh1D",
    "PermittivityProfile",
    "build_mesh",
    "ModeBasis",
    "solve_modes",
    "QuantizedField",
]
__version__ = "0.1.0"
