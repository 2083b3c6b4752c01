"""Linear combinations of hashable generators with exact coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, Mapping

LinComb = dict  # generator -> Fraction


def add_to(out: dict, g: Hashable, c) -> None:
    if not c:
        return
    v = out.get(g, 0) + c
    if v:
        out[g] = v
    else:
        out.pop(g, None)


def lc_add(a: Mapping, b: Mapping, scale=1) -> dict:
    out = dict(a)
    for g, c in b.items():
        add_to(out, g, scale * c)
    return out


def lc_scale(a: Mapping, c) -> dict:
    if not c:
        return {}
    return {g: c * v for g, v in a.items()}


def lc_clean(a: Mapping) -> dict:
    return {g: Fraction(c) for g, c in a.items() if c}


def lc_sum(parts: Iterable[Mapping]) -> dict:
    out: dict = {}
    for p in parts:
        for g, c in p.items():
            add_to(out, g, c)
    return out


def perm_sign(seq: list) -> int:
    """Sign of the permutation that sorts seq (entries distinct and comparable)."""
    s = 1
    a = list(seq)
    for i in range(len(a)):
        for j in range(i + 1, len(a)):
            if a[i] > a[j]:
                s = -s
    return s


def sort_sign(keys: list) -> int:
    """Sign of sorting distinct keys; alias kept for readability at call sites."""
    return perm_sign(keys)
