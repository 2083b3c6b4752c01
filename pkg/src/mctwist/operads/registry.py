"""Complex identifiers, default windows and expected homology."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from math import factorial

from ..errors import UnknownComplex
from .bamboo import TwNcBV, TwNcGerst
from .base import Complex
from .gerst import TwBV, TwGerst, gerst_dims, gerst_plus_dims
from .graphs import TwGra
from .trees import Br, TwBT, TwSRT

COMPLEXES = {c.id: c for c in (TwNcGerst, TwNcBV, TwGerst, TwBV, TwSRT, TwBT, Br, TwGra)}


@lru_cache(maxsize=None)
def get_complex(complex_id: str) -> Complex:
    """One shared instance per id (bases are cached on it)."""
    try:
        return COMPLEXES[complex_id]()
    except KeyError:
        raise UnknownComplex(f"unknown complex {complex_id!r}; known: {', '.join(sorted(COMPLEXES))}") from None


def default_gradings(complex_id: str, n: int) -> list[tuple]:
    if complex_id == "twncbv":
        return [(t,) for t in range(3)]
    if complex_id == "twgra":
        return [(c, b1) for c in range(1, max(n, 1) + 1) for b1 in range(2)]
    return [()]


def default_degrees(complex_id: str, n: int, grading: tuple) -> range:
    """The degree window examined when none is given.  Outside it the homology is
    zero by the expected tables, and the slices grow quickly, so it is kept near
    the top degree."""
    if complex_id == "twncgerst":
        return range(-4, n + 1)
    if complex_id == "twncbv":
        (t,) = grading
        return range(-4, t + 1) if n == 0 else range(n - 3, n + t + 1)
    if complex_id in ("twsrt", "twbt", "br"):
        if n == 0:
            return range(-4, -1)
        return range(n - 3 if n <= 4 else n - 2, n)
    if complex_id == "twgerst":
        return range(-2, n + 1)
    if complex_id == "twbv":
        return range(-2, n + 1)
    if complex_id == "twgra":
        c, b1 = grading
        top = n - c + b1
        # black count k = top - d; four whites and three blacks is already 2^21 edge sets
        return range(top - (3 if n <= 3 else 2), top + 1)
    raise UnknownComplex(complex_id)


# expected homology --------------------------------------------------------------


def expected_entries(complex_id: str) -> list[dict]:
    """Expected betti numbers over a fixed window, with the rule that produced each entry."""
    out = []

    def add(n, d, grading, betti, source):
        out.append({"complex": complex_id, "arity": n, "degree": d, "grading": list(grading), "betti": betti, "source": source})

    if complex_id == "twncgerst":
        for n in range(0, 7):
            for d in range(-6, n + 1):
                hit = d == n - 1 if n else d == -4
                add(n, d, (), int(hit), "one class in degree n-1 for n >= 1; arity 0: one class in degree -4")
    elif complex_id == "twncbv":
        for n in range(0, 6):
            for t in range(0, 4):
                for d in range(-6, n + t + 2):
                    if n:
                        hit = d == n - 1
                    else:
                        hit = d == (-4 if t == 0 else -1)
                    add(n, d, (t,), int(hit), "one class per (n, t) in degree n-1; arity 0: degree -4 at t = 0, -1 at t >= 1")
    elif complex_id == "twsrt":
        for n in range(1, 7):
            for d in range(n - 4, n):
                add(n, d, (), factorial(n - 1) if d == n - 1 else 0, "(n-1)! classes, all in degree n-1")
    elif complex_id == "twgerst":
        for n in range(1, 6):
            dims = gerst_dims(n)
            for d in range(-3, n + 1):
                add(n, d, (), dims.get(d, 0), "dim Gerst(n)_d by set partitions with Lie words per block")
    elif complex_id == "twbv":
        for n in range(0, 5):
            dims = gerst_plus_dims(n)
            for d in range(-3, n + 1):
                add(n, d, (), dims.get(d, 0), "dim Gerst(n)_d + dim Gerst(n)_{d+1}; arity 0: one class in degree -1")
    return out


@lru_cache(maxsize=None)
def bundled_expectations(complex_id: str) -> dict:
    """{(n, d, grading): betti} from the packaged data file, empty when none ships."""
    name = f"expected_{complex_id}.json"
    path = resources.files("mctwist") / "data" / name
    if not path.is_file():
        return {}
    return load_expectations(path.read_text())


def load_expectations(text: str) -> dict:
    data = json.loads(text)
    return {(e["arity"], e["degree"], tuple(e["grading"])): e["betti"] for e in data["entries"]}


def write_expected_files(directory) -> list:
    """Regenerate the packaged expected tables."""
    from pathlib import Path

    written = []
    for cid in ("twncgerst", "twncbv", "twsrt", "twgerst", "twbv"):
        p = Path(directory) / f"expected_{cid}.json"
        p.write_text(json.dumps({"complex": cid, "entries": expected_entries(cid)}, indent=1) + "\n")
        written.append(p)
    return written
