"""Common interface of the twisted operad complexes and the per-cell homology engine.

Every twisted differential lowers the degree by one and raises the black count
by one, so a slice (arity n, degree d, preserved gradings g) splits into cells
indexed by the black count k, and the complex splits into the strands
... -> C(d+1, k-1) -> C(d, k) -> C(d-1, k+1) -> ...  Betti numbers are computed
per cell and summed over k.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable

from ..errors import CompositionNotZero, IndexOutOfRange, InfiniteSliceWithoutCap
from ..linalg import SparseMatrix, homology_dims


class Complex:
    """A twisted operad presented by a finite basis per cell (n, d, k, grading)."""

    id: str = ""
    gradings: tuple[str, ...] = ()
    symmetric: bool = True

    def __init__(self):
        self._basis_cache: dict = {}

    # generators -------------------------------------------------------
    def degree(self, g) -> int:
        raise NotImplementedError

    def black(self, g) -> int:
        raise NotImplementedError

    def arity(self, g) -> int:
        raise NotImplementedError

    def grading(self, g) -> tuple:
        return ()

    def differential(self, g) -> dict:
        raise NotImplementedError

    def compose(self, g1, i: int, g2) -> dict:
        raise NotImplementedError

    def show(self, g) -> str:
        return str(g)

    # enumeration ------------------------------------------------------
    def black_range(self, n: int, d: int, grading: tuple) -> range | None:
        """Black counts that can occur in the slice, or None when unbounded."""
        raise NotImplementedError

    def certificate(self) -> str:
        raise NotImplementedError

    def enumerate_cell(self, n: int, d: int, k: int, grading: tuple) -> Iterable:
        raise NotImplementedError

    def basis(self, n: int, d: int, k: int, grading: tuple = ()) -> list:
        key = (n, d, k, tuple(grading))
        if key not in self._basis_cache:
            if k < 0:
                self._basis_cache[key] = []
            else:
                self._basis_cache[key] = sorted(set(self.enumerate_cell(n, d, k, tuple(grading))), key=self.sort_key)
        return self._basis_cache[key]

    def sort_key(self, g):
        return g

    def check_index(self, g1, i: int) -> None:
        if not 1 <= i <= self.arity(g1):
            raise IndexOutOfRange(f"index {i} outside 1..{self.arity(g1)}")


def differential_matrix(cx: Complex, n: int, d: int, k: int, grading: tuple, rule=None) -> SparseMatrix:
    """Matrix of d: C(n, d, k) -> C(n, d-1, k+1); columns are sources."""
    src = cx.basis(n, d, k, grading)
    tgt = cx.basis(n, d - 1, k + 1, grading)
    index = {g: r for r, g in enumerate(tgt)}
    diff = rule or cx.differential
    entries: dict = {}
    for c, g in enumerate(src):
        for h, v in diff(g).items():
            if h not in index:
                raise ValueError(f"{cx.id}: term {cx.show(h)} of d({cx.show(g)}) is outside the enumerated basis")
            entries[(index[h], c)] = Fraction(v)
    return SparseMatrix(len(tgt), len(src), entries)


@dataclass(frozen=True)
class CellResult:
    n: int
    d: int
    k: int
    grading: tuple
    dim_chains: int
    betti: int


def cell_homology(cx: Complex, n: int, d: int, k: int, grading: tuple = ()) -> CellResult:
    d_in = differential_matrix(cx, n, d + 1, k - 1, grading)
    d_out = differential_matrix(cx, n, d, k, grading)
    h = homology_dims(d_out, d_in)
    return CellResult(n, d, k, tuple(grading), h.dim_chains, h.betti)


@dataclass
class SliceResult:
    complex_id: str
    n: int
    d: int
    grading: tuple
    dim_chains: int
    betti: int
    exact: bool
    ks: list = field(default_factory=list)


def slice_cells(cx: Complex, n: int, d: int, grading: tuple, black_cap: int | None):
    """Black counts to examine and whether the result is exact."""
    r = cx.black_range(n, d, grading)
    if r is None:
        if black_cap is None:
            raise InfiniteSliceWithoutCap(f"{cx.id}: slice n={n} d={d} {grading} needs a black cap")
        return list(range(black_cap + 1)), False
    ks = list(r)
    if black_cap is not None and ks and ks[-1] > black_cap:
        return [k for k in ks if k <= black_cap], False
    return ks, True


def slice_homology(cx: Complex, n: int, d: int, grading: tuple = (), black_cap: int | None = None) -> SliceResult:
    ks, exact = slice_cells(cx, n, d, grading, black_cap)
    cells = [cell_homology(cx, n, d, k, grading) for k in ks]
    return SliceResult(
        cx.id, n, d, tuple(grading), sum(c.dim_chains for c in cells), sum(c.betti for c in cells), exact, [c.k for c in cells if c.betti]
    )


@dataclass
class DSquaredReport:
    complex_id: str
    checked: int
    failures: list

    @property
    def ok(self) -> bool:
        return not self.failures


def d_squared_cell(cx: Complex, n: int, d: int, k: int, grading: tuple = (), rule=None) -> list:
    """Generators g of the cell with d(d(g)) != 0; an empty list means the check passes."""
    diff = rule or cx.differential
    bad = []
    for g in cx.basis(n, d, k, grading):
        acc: dict = {}
        for h, v in diff(g).items():
            for h2, w in diff(h).items():
                acc[h2] = acc.get(h2, 0) + v * w
        if any(acc.values()):
            bad.append(g)
    return bad


def d_squared_check(cx: Complex, cells: Iterable[tuple], rule=None) -> DSquaredReport:
    """cells: tuples (n, d, k, grading)."""
    checked = 0
    failures = []
    for n, d, k, grading in cells:
        checked += len(cx.basis(n, d, k, grading))
        for g in d_squared_cell(cx, n, d, k, grading, rule):
            failures.append((n, d, k, grading, cx.show(g)))
    return DSquaredReport(cx.id, checked, failures)


def check_composition_zero(cx: Complex, n: int, d: int, k: int, grading: tuple = ()) -> None:
    """Raise CompositionNotZero when the two matrices around the cell do not compose to zero."""
    a = differential_matrix(cx, n, d + 1, k - 1, grading)
    b = differential_matrix(cx, n, d, k, grading)
    homology_dims(b, a)


def normalize(terms: Iterable[tuple[Hashable, object]]) -> dict:
    """Sum (generator, coefficient) pairs, dropping zero generators (None) and zero totals."""
    out: dict = {}
    for g, c in terms:
        if g is None or not c:
            continue
        v = out.get(g, 0) + c
        if v:
            out[g] = v
        else:
            del out[g]
    return {g: Fraction(v) for g, v in out.items()}


__all__ = [
    "CellResult",
    "Complex",
    "CompositionNotZero",
    "DSquaredReport",
    "SliceResult",
    "cell_homology",
    "check_composition_zero",
    "d_squared_cell",
    "d_squared_check",
    "differential_matrix",
    "normalize",
    "slice_cells",
    "slice_homology",
]
