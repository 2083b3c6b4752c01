"""Immutable sparse matrices over Q with exact rank, kernel and homology."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping

from ..errors import CompositionNotZero

Scalar = Fraction


class SparseMatrix:
    """A rows x cols matrix storing only its nonzero entries."""

    __slots__ = ("rows", "cols", "_entries")

    def __init__(self, rows: int, cols: int, entries: Mapping[tuple[int, int], object] = ()):
        if rows < 0 or cols < 0:
            raise ValueError("negative matrix shape")
        clean: dict[tuple[int, int], Fraction] = {}
        items = entries.items() if isinstance(entries, Mapping) else entries
        for (r, c), v in items:
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError(f"entry ({r}, {c}) outside {rows}x{cols}")
            v = Fraction(v)
            if v:
                clean[(r, c)] = v
        self.rows = rows
        self.cols = cols
        self._entries = clean

    @classmethod
    def from_columns(cls, rows: int, columns: Iterable[Mapping[int, object]]) -> "SparseMatrix":
        """Build a matrix whose c-th column is the sparse vector columns[c]."""
        entries = {}
        cols = 0
        for c, col in enumerate(columns):
            cols = c + 1
            for r, v in col.items():
                entries[(r, c)] = v
        return cls(rows, cols, entries)

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def zero(cls, rows: int, cols: int) -> "SparseMatrix":
        return cls(rows, cols)

    @property
    def entries(self) -> dict[tuple[int, int], Fraction]:
        return dict(self._entries)

    @property
    def nnz(self) -> int:
        return len(self._entries)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        return self._entries.get(key, Fraction(0))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self._entries == other._entries

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, frozenset(self._entries.items())))

    def __repr__(self) -> str:
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={self.nnz})"

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self._entries.items()})

    def row_dicts(self) -> list[dict[int, Fraction]]:
        out: list[dict[int, Fraction]] = [dict() for _ in range(self.rows)]
        for (r, c), v in self._entries.items():
            out[r][c] = v
        return out

    def column_dicts(self) -> list[dict[int, Fraction]]:
        out: list[dict[int, Fraction]] = [dict() for _ in range(self.cols)]
        for (r, c), v in self._entries.items():
            out[c][r] = v
        return out

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        left_cols = self.column_dicts()
        acc: dict[tuple[int, int], Fraction] = {}
        for (k, c), v in other._entries.items():
            for r, u in left_cols[k].items():
                key = (r, c)
                acc[key] = acc.get(key, 0) + u * v
        return SparseMatrix(self.rows, other.cols, acc)

    def apply(self, vec: Mapping[int, object]) -> dict[int, Fraction]:
        """Multiply by a sparse column vector."""
        cols = self.column_dicts()
        out: dict[int, Fraction] = {}
        for c, v in vec.items():
            for r, u in cols[c].items():
                out[r] = out.get(r, 0) + u * v
        return {r: v for r, v in out.items() if v}

    def is_zero(self) -> bool:
        return not self._entries

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (r, c), v in self._entries.items():
            out[r][c] = v
        return out


def _integer_rows(m: SparseMatrix) -> dict[int, dict[int, int]]:
    rows: dict[int, dict[int, int]] = {}
    for r, row in enumerate(m.row_dicts()):
        if not row:
            continue
        den = lcm(*(v.denominator for v in row.values()))
        ints = {c: int(v * den) for c, v in row.items()}
        rows[r] = _primitive(ints)
    return rows


def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {c: v // g for c, v in row.items()}
    return row


def rank(m: SparseMatrix) -> int:
    """Exact rank by fraction-free elimination with Markowitz-style pivoting.

    The pivot column is the live column with fewest nonzeros, the pivot row
    the shortest row meeting it; ties go to the smallest index.
    """
    rows = _integer_rows(m)
    col_rows: dict[int, set[int]] = {}
    for r, row in rows.items():
        for c in row:
            col_rows.setdefault(c, set()).add(r)
    heap = [(len(rs), c) for c, rs in col_rows.items()]
    heapq.heapify(heap)
    result = 0
    while heap:
        count, c = heapq.heappop(heap)
        rs = col_rows.get(c)
        if not rs:
            continue
        if count != len(rs):
            heapq.heappush(heap, (len(rs), c))
            continue
        pr = min(rs, key=lambda r: (len(rows[r]), r))
        prow = rows.pop(pr)
        for cc in prow:
            col_rows[cc].discard(pr)
        p = prow[c]
        touched = set(prow)
        for r in sorted(rs):
            row = rows[r]
            a = row[c]
            g = gcd(p, a)
            fp, fa = p // g, a // g
            new = {cc: v * fp for cc, v in row.items()}
            for cc, v in prow.items():
                nv = new.get(cc, 0) - fa * v
                if nv:
                    if cc not in new:
                        col_rows[cc].add(r)
                    new[cc] = nv
                else:
                    if cc in new:
                        del new[cc]
                        col_rows[cc].discard(r)
            touched.update(row)
            if new:
                rows[r] = _primitive(new)
            else:
                del rows[r]
        del col_rows[c]
        result += 1
        for cc in touched:
            if cc in col_rows:
                if col_rows[cc]:
                    heapq.heappush(heap, (len(col_rows[cc]), cc))
                else:
                    del col_rows[cc]
    return result


def rref(m: SparseMatrix) -> tuple[list[dict[int, Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (rows, pivot columns)."""
    rows = [row for row in m.row_dicts() if row]
    pivots: dict[int, dict[int, Fraction]] = {}
    for row in rows:
        row = dict(row)
        # pivot rows vanish on the other pivot columns, so one pass suffices
        for c in [c for c in row if c in pivots]:
            f = row[c]
            for cc, v in pivots[c].items():
                nv = row.get(cc, 0) - f * v
                if nv:
                    row[cc] = nv
                else:
                    row.pop(cc, None)
        if not row:
            continue
        c = min(row)
        inv = 1 / row[c]
        row = {cc: v * inv for cc, v in row.items()}
        for pc, prow in pivots.items():
            if c in prow:
                f = prow[c]
                for cc, v in row.items():
                    nv = prow.get(cc, 0) - f * v
                    if nv:
                        prow[cc] = nv
                    else:
                        prow.pop(cc, None)
        pivots[c] = row
    order = sorted(pivots)
    return [pivots[c] for c in order], order


def kernel_basis(m: SparseMatrix) -> list[dict[int, Fraction]]:
    """A Q-basis of ker(m) as sparse column vectors, one per free column."""
    rows, piv = rref(m)
    pivset = set(piv)
    out = []
    for f in range(m.cols):
        if f in pivset:
            continue
        vec = {f: Fraction(1)}
        for pc, row in zip(piv, rows):
            v = row.get(f)
            if v:
                vec[pc] = -v
        out.append(vec)
    return out


def solve(m: SparseMatrix, rhs: Mapping[int, object]) -> dict[int, Fraction] | None:
    """One solution x of m x = rhs, or None when rhs is not in the image."""
    aug_col = m.cols
    entries = dict(m.entries)
    for r, v in rhs.items():
        if v:
            entries[(r, aug_col)] = v
    rows, piv = rref(SparseMatrix(m.rows, m.cols + 1, entries))
    if aug_col in piv:
        return None
    x = {}
    for pc, row in zip(piv, rows):
        v = row.get(aug_col)
        if v:
            x[pc] = v
    return x


@dataclass(frozen=True)
class ChainSliceHomology:
    dim_chains: int
    rank_d_in: int
    rank_d_out: int

    @property
    def betti(self) -> int:
        return self.dim_chains - self.rank_d_in - self.rank_d_out

    def __post_init__(self):
        if self.betti < 0:
            raise ValueError("negative betti number")


def homology_dims(d_k: SparseMatrix, d_k1: SparseMatrix) -> ChainSliceHomology:
    """Homology at the middle of C_{k+1} -> C_k -> C_{k-1}.

    d_k maps C_k to C_{k-1} (cols = dim C_k); d_k1 maps C_{k+1} to C_k.
    """
    if d_k.cols != d_k1.rows:
        raise ValueError(f"differentials not composable: {d_k.shape} after {d_k1.shape}")
    if not (d_k @ d_k1).is_zero():
        raise CompositionNotZero(f"d_k d_k+1 has {(d_k @ d_k1).nnz} nonzero entries")
    return ChainSliceHomology(d_k.cols, rank(d_k1), rank(d_k))
