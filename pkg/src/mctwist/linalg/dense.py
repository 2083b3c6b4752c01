"""Dense rational elimination, kept deliberately naive as a reference."""

from __future__ import annotations

from fractions import Fraction


def dense_rank(matrix: list[list[object]]) -> int:
    """Rank by textbook Gaussian elimination on a dense copy."""
    a = [[Fraction(x) for x in row] for row in matrix]
    if not a:
        return 0
    nrows, ncols = len(a), len(a[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, nrows):
            if a[i][c]:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == nrows:
            break
    return r


def dense_matmul(a: list[list[object]], b: list[list[object]]) -> list[list[Fraction]]:
    return [[sum((Fraction(x) * Fraction(y) for x, y in zip(row, col)), Fraction(0)) for col in zip(*b)] for row in a]
