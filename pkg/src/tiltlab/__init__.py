"""Exact certification of tilting modules over bound quiver algebras."""

from .exactla import ExactMatrix, FieldSpec
from .algebra import Algebra, Quiver, RelationSet, bound_quiver_algebra, structure_algebra
from .repmod import FdModule, ModuleMap, canonical_modules, decompose, direct_sum, end_algebra, is_isomorphic
from .homology import BoundedComplex, ChainMap, ext, homology, min_proj_resolution, tor
from .tiltcore import TiltingContext, certify_tilting, good_tilt_formal

__all__ = [
    "Algebra", "BoundedComplex", "ChainMap", "ExactMatrix", "FdModule", "FieldSpec", "ModuleMap", "Quiver",
    "RelationSet", "TiltingContext", "bound_quiver_algebra", "canonical_modules", "certify_tilting", "decompose",
    "direct_sum", "end_algebra", "ext", "good_tilt_formal", "homology", "is_isomorphic", "min_proj_resolution",
    "structure_algebra", "tor",
]
