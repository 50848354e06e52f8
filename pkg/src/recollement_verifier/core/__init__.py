"""수학 코어: 유한체 선형대수, bound quiver 대수, 모듈 범주, recollement, 부분범주, tilting, gluing"""

from .errors import RecollementError
from .glue import GLUE_OPERATIONS, GlueJob
from .modcat import Module, ModuleMap, Universe, enumerate_indecomposables
from .quivalg import BoundQuiverAlgebra, build_algebra
from .recol import Functor, Recollement, RecollementUniverses, build_recollement, build_universes
from .subcat import Subcat
from .tilt import TauTriple, phi, psi

__all__ = [
    "BoundQuiverAlgebra",
    "Functor",
    "GLUE_OPERATIONS",
    "GlueJob",
    "Module",
    "ModuleMap",
    "Recollement",
    "RecollementError",
    "RecollementUniverses",
    "Subcat",
    "TauTriple",
    "Universe",
    "build_algebra",
    "build_recollement",
    "build_universes",
    "enumerate_indecomposables",
    "phi",
    "psi",
]
