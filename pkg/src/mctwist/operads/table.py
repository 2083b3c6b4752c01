"""Homology tables over windows of slices, computed in parallel and merged in key order."""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

from .. import __version__
from .base import slice_homology
from .registry import default_degrees, default_gradings, get_complex


@dataclass
class Row:
    complex: str
    arity: int
    degree: int
    grading: tuple
    dim_chains: int
    betti: int
    exact: bool
    classes_at_black: list


def _slice(job) -> Row:
    cid, n, d, grading, cap = job
    r = slice_homology(get_complex(cid), n, d, grading, cap)
    return Row(cid, n, d, tuple(grading), r.dim_chains, r.betti, r.exact, r.ks)


def slice_jobs(complex_id: str, arities, degrees=None, gradings=None, black_cap=None) -> list:
    jobs = []
    for n in arities:
        for g in gradings if gradings is not None else default_gradings(complex_id, n):
            for d in degrees if degrees is not None else default_degrees(complex_id, n, g):
                jobs.append((complex_id, n, d, tuple(g), black_cap))
    return sorted(set(jobs), key=lambda j: (j[1], j[3], j[2]))


def homology_table(complex_id: str, arities, degrees=None, gradings=None, black_cap=None, jobs: int = 1) -> list[Row]:
    """One row per slice (arity, grading, degree); rows come back in that key order."""
    work = slice_jobs(complex_id, arities, degrees, gradings, black_cap)
    get_complex(complex_id)
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_slice, work))
    return [_slice(j) for j in work]


def table_header(complex_id: str, rows: list[Row], black_cap, seed=None) -> dict:
    cx = get_complex(complex_id)
    exact = all(r.exact for r in rows)
    return {
        "tool": "mctwist",
        "version": __version__,
        "complex": complex_id,
        "gradings": list(cx.gradings),
        "black_cap": black_cap,
        "seed": seed,
        "finiteness": cx.certificate() if exact else "truncated",
    }


def to_tsv(header: dict, rows: list[Row], gradings: tuple) -> str:
    lines = ["# " + " ".join(f"{k}={v}" for k, v in header.items())]
    lines.append("\t".join(["complex", "arity", "degree", *gradings, "dim_chains", "betti", "exact"]))
    for r in rows:
        lines.append("\t".join(map(str, [r.complex, r.arity, r.degree, *r.grading, r.dim_chains, r.betti, "yes" if r.exact else "truncated"])))
    return "\n".join(lines) + "\n"


def to_json(header: dict, rows: list[Row]) -> str:
    return json.dumps({"header": header, "rows": [dict(asdict(r), grading=list(r.grading)) for r in rows]}, indent=1) + "\n"
