"""Exact sparse linear algebra over the rationals."""

from .sparse import (
    ChainSliceHomology,
    Scalar,
    SparseMatrix,
    homology_dims,
    kernel_basis,
    rank,
    rref,
    solve,
)
from .dense import dense_rank

__all__ = [
    "ChainSliceHomology",
    "Scalar",
    "SparseMatrix",
    "dense_rank",
    "homology_dims",
    "kernel_basis",
    "rank",
    "rref",
    "solve",
]
