"""Twisted operads: generators, signed compositions, twisted differentials and homology."""

from .bamboo import Bamboo, TadpoleBamboo, TwNcBV, TwNcGerst, bamboo_text, parse_bamboo
from .base import (
    CellResult,
    Complex,
    DSquaredReport,
    SliceResult,
    cell_homology,
    check_composition_zero,
    d_squared_cell,
    d_squared_check,
    differential_matrix,
    slice_homology,
)
from .checks import (
    ChainSlice,
    CheckReport,
    br_subcomplex,
    def_complex_identification,
    gerst_map_check,
    operadic_mc_check,
    rpl_lie_rank,
    show_lincomb,
    show_obstruction,
    tw_stability_obstruction,
)
from .gerst import FreeGerstModel, TwBV, TwGerst, gerst_dims, gerst_plus_dims
from .graphs import SimpleGraph, TwGra, canonical_graph, graph_text, parse_graph
from .registry import COMPLEXES, default_degrees, default_gradings, expected_entries, get_complex
from .table import Row, homology_table
from .trees import RPL, Br, TwBT, TwSRT, is_brace, parse_tree, tree_text

__all__ = [
    "COMPLEXES",
    "RPL",
    "Bamboo",
    "Br",
    "CellResult",
    "ChainSlice",
    "CheckReport",
    "Complex",
    "DSquaredReport",
    "FreeGerstModel",
    "Row",
    "SimpleGraph",
    "SliceResult",
    "TadpoleBamboo",
    "TwBT",
    "TwBV",
    "TwGerst",
    "TwGra",
    "TwNcBV",
    "TwNcGerst",
    "TwSRT",
    "bamboo_text",
    "br_subcomplex",
    "canonical_graph",
    "cell_homology",
    "check_composition_zero",
    "d_squared_cell",
    "d_squared_check",
    "def_complex_identification",
    "default_degrees",
    "default_gradings",
    "differential_matrix",
    "expected_entries",
    "gerst_dims",
    "gerst_map_check",
    "gerst_plus_dims",
    "get_complex",
    "graph_text",
    "homology_table",
    "is_brace",
    "operadic_mc_check",
    "parse_bamboo",
    "parse_graph",
    "parse_tree",
    "rpl_lie_rank",
    "show_lincomb",
    "show_obstruction",
    "slice_homology",
    "tree_text",
    "tw_stability_obstruction",
]
