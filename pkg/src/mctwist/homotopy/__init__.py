"""Curved A-infinity and L-infinity algebras, twisting, infinity-morphisms and gauge trivialization."""

from .ainfty import (
    CLASSICAL,
    CLASSICAL_CURVED,
    SHIFTED,
    SHIFTED_CURVED,
    CurvedAInftyAlgebra,
    RelationReport,
    check_curved_ainfty,
    mc_residual_ainfty,
    twist_additivity_check,
    twist_ainfty,
)
from .convolution import ConvolutionElement, decode, encode
from .kp import InftyIsotopy, dual_of_curvature, homotopy_identity_residual, kp_residual, kp_trivialize
from .linfty import (
    CurvedLInftyAlgebra,
    check_curved_linfty,
    from_dglie,
    mc_residual_linfty,
    symmetrize,
    twist_linfty,
)
from .module import GradedModuleSpec
from .morphisms import (
    InftyMorphism,
    dolgushev_rogers_compose,
    identity_isotopy,
    infty_compose,
    is_infty_morphism,
    morphism_residual,
    strict_morphism,
    twist_morphism,
)

__all__ = [
    "CLASSICAL",
    "CLASSICAL_CURVED",
    "SHIFTED",
    "SHIFTED_CURVED",
    "ConvolutionElement",
    "CurvedAInftyAlgebra",
    "CurvedLInftyAlgebra",
    "GradedModuleSpec",
    "InftyIsotopy",
    "InftyMorphism",
    "RelationReport",
    "check_curved_ainfty",
    "check_curved_linfty",
    "decode",
    "dolgushev_rogers_compose",
    "dual_of_curvature",
    "encode",
    "from_dglie",
    "homotopy_identity_residual",
    "identity_isotopy",
    "infty_compose",
    "is_infty_morphism",
    "kp_residual",
    "kp_trivialize",
    "mc_residual_ainfty",
    "mc_residual_linfty",
    "morphism_residual",
    "strict_morphism",
    "symmetrize",
    "twist_additivity_check",
    "twist_ainfty",
    "twist_linfty",
    "twist_morphism",
]
