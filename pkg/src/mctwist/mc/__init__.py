"""Maurer-Cartan calculus: free Lie algebras, pre-Lie integration, dg Lie deformations."""

from .algebra import DG_LIE, PRE_LIE, AlgebraElement, FilteredAlgebraSpec
from .deform import (
    Failure,
    Obstruction,
    extend_formal_deformation,
    gauge_series_action,
    gauge_trivialize_formal,
    homology_class_nonzero,
    twist_dglie,
)
from .freelie import FreeLieElement, bch, bch_lie, lyndon_words, multilinear_lie_dimension
from .prelie import (
    MaurerCartanElement,
    bch_eval,
    circle_product,
    gauge_act_prelie,
    gauge_routes,
    mc_residual,
    prelie_exp,
    prelie_log,
    symmetric_brace,
)

__all__ = [
    "DG_LIE",
    "PRE_LIE",
    "AlgebraElement",
    "Failure",
    "FilteredAlgebraSpec",
    "FreeLieElement",
    "MaurerCartanElement",
    "Obstruction",
    "bch",
    "bch_eval",
    "bch_lie",
    "circle_product",
    "extend_formal_deformation",
    "gauge_act_prelie",
    "gauge_routes",
    "gauge_series_action",
    "gauge_trivialize_formal",
    "homology_class_nonzero",
    "lyndon_words",
    "mc_residual",
    "multilinear_lie_dimension",
    "prelie_exp",
    "prelie_log",
    "symmetric_brace",
    "twist_dglie",
]
