"""Relative homological algebra and singularity categories for quiver algebras."""

from .exactla import QQ, FieldSpec, Mat
from .repalg import AlgebraPresentation, Module, ModuleMap, Quiver
from .subcat import AddCategory
from .cx import ChainMap, Complex
from .resolve import cdim, left_resolution, rel_ext_dim
from .gcat import GorensteinCertificate, gp_membership, verify_certificate
from .singcat import sg_hom_dim, sg_representative, stable_hom, verify_equivalence

__all__ = [
    "QQ", "FieldSpec", "Mat", "AlgebraPresentation", "Module", "ModuleMap", "Quiver", "AddCategory",
    "ChainMap", "Complex", "cdim", "left_resolution", "rel_ext_dim", "GorensteinCertificate",
    "gp_membership", "verify_certificate", "sg_hom_dim", "sg_representative", "stable_hom",
    "verify_equivalence",
]
