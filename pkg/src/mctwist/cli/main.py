"""Command-line front end.

Exit codes: 0 pass, 2 property failure, 3 input error, 4 truncation required.
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from .. import __version__
from ..errors import InfiniteSliceWithoutCap, MCTwistError, UnknownComplex

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_TRUNCATION = 0, 2, 3, 4


class InputError(click.ClickException):
    exit_code = EXIT_INPUT


def parse_range(text: str | None, name: str) -> list[int] | None:
    """'A..B' (inclusive) or 'A'."""
    if text is None:
        return None
    try:
        if ".." in text:
            a, b = text.split("..")
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError:
        raise InputError(f"--{name}: expected A..B or an integer, got {text!r}") from None
    if hi < lo:
        raise InputError(f"--{name}: empty range {text!r}")
    return list(range(lo, hi + 1))


def _default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("MCTWIST_JOBS", "1")))
    except ValueError:
        return 1


def _read_json(path: str, what: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {what} {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{what} {path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        click.echo(text, nl=False)


def _check_positive(value, name):
    if value is not None and value < 0:
        raise InputError(f"--{name} must be non-negative")


@click.group()
@click.version_option(__version__, prog_name="mctwist")
def cli():
    """Maurer-Cartan calculus, twisting of homotopy algebras and twisted operad homology."""


# homology ------------------------------------------------------------------------


@cli.command()
@click.option("--complex", "complex_id", required=True, help="twncgerst, twncbv, twgerst, twbv, twsrt, twbt, br, twgra")
@click.option("--arity", required=True, help="A..B")
@click.option("--degree", default=None, help="A..B; default: a window near the top degree")
@click.option("--tadpoles", default=None, help="A..B (twncbv)")
@click.option("--components", default=None, help="A..B (twgra)")
@click.option("--loop-order", default=None, help="A..B (twgra)")
@click.option("--black-cap", type=int, default=None, help="largest black count examined")
@click.option("--format", "fmt", type=click.Choice(["tsv", "json"]), default="tsv")
@click.option("--jobs", type=int, default=None, help="worker processes (default $MCTWIST_JOBS or 1)")
@click.option("--seed", type=int, default=0, help="recorded in the header")
@click.option("--expect", type=click.Path(), default=None, help="expected table (JSON); default: the bundled one")
@click.option("--dump-basis", is_flag=True, help="list the basis of every cell after the table")
@click.option("--output", "-o", default=None)
def homology(complex_id, arity, degree, tadpoles, components, loop_order, black_cap, fmt, jobs, seed, expect, dump_basis, output):
    """Betti numbers of a twisted operad, slice by slice."""
    from ..operads.registry import bundled_expectations, default_gradings, get_complex, load_expectations
    from ..operads.table import homology_table, table_header, to_json, to_tsv

    try:
        cx = get_complex(complex_id)
    except UnknownComplex as exc:
        raise InputError(str(exc)) from None
    _check_positive(black_cap, "black-cap")
    arities = parse_range(arity, "arity")
    degrees = parse_range(degree, "degree")
    gradings = None
    if complex_id == "twncbv" and tadpoles is not None:
        gradings = [(t,) for t in parse_range(tadpoles, "tadpoles")]
    if complex_id == "twgra" and (components is not None or loop_order is not None):
        cs = parse_range(components, "components") or sorted({g[0] for n in arities for g in default_gradings("twgra", n)})
        bs = parse_range(loop_order, "loop-order") or [0, 1]
        gradings = [(c, b) for c in cs for b in bs]
    jobs = jobs or _default_jobs()
    try:
        rows = homology_table(complex_id, arities, degrees, gradings, black_cap, jobs)
    except InfiniteSliceWithoutCap as exc:
        click.echo(f"error: {exc}; pass --black-cap K (output is then labelled truncated)", err=True)
        sys.exit(EXIT_TRUNCATION)
    header = table_header(complex_id, rows, black_cap, seed)
    text = to_tsv(header, rows, cx.gradings) if fmt == "tsv" else to_json(header, rows)
    if dump_basis:
        text += _basis_dump(cx, rows, black_cap, fmt == "tsv")
    _emit(text, output)
    expected = load_expectations(Path(expect).read_text()) if expect else bundled_expectations(complex_id)
    bad = [r for r in rows if r.exact and (r.arity, r.degree, r.grading) in expected and expected[(r.arity, r.degree, r.grading)] != r.betti]
    for r in bad:
        click.echo(
            f"mismatch: arity {r.arity} degree {r.degree} grading {r.grading}: betti {r.betti}, expected {expected[(r.arity, r.degree, r.grading)]}",
            err=True,
        )
    sys.exit(EXIT_FAIL if bad else EXIT_OK)


def _basis_dump(cx, rows, black_cap, comment: bool) -> str:
    from ..operads.base import slice_cells

    lines = []
    for r in rows:
        ks, _ = slice_cells(cx, r.arity, r.degree, r.grading, black_cap)
        for k in ks:
            for g in cx.basis(r.arity, r.degree, k, r.grading):
                lines.append(f"{'# ' if comment else ''}basis arity={r.arity} degree={r.degree} grading={r.grading} k={k}: {cx.show(g)}")
    return "\n".join(lines) + ("\n" if lines else "")


# twist ------------------------------------------------------------------------------


@cli.command()
@click.option("--algebra", required=True, type=click.Path(), help="algebra JSON (dg Lie, A-infinity or L-infinity)")
@click.option("--element", required=True, type=click.Path(), help="twisting element JSON")
@click.option("--output", "-o", default=None)
def twist(algebra, element, output):
    """Twist an algebra by an element and check the relations of the result."""
    from ..homotopy import CurvedAInftyAlgebra, CurvedLInftyAlgebra, twist_ainfty, twist_linfty
    from ..mc import AlgebraElement, FilteredAlgebraSpec, mc_residual, twist_dglie

    doc = _read_json(algebra, "algebra")
    el = _read_json(element, "element")
    try:
        structure = doc.get("structure")
        if structure in ("ainfty", "linfty"):
            cls = CurvedAInftyAlgebra if structure == "ainfty" else CurvedLInftyAlgebra
            alg = cls.from_json(doc)
            a = _module_element(alg.module, el)
            tw = (twist_ainfty if structure == "ainfty" else twist_linfty)(alg, a)
            report = tw.check()
            out = tw.to_json()
            out["curved"] = bool(tw.curvature)
            out["relations"] = report.to_json()
            ok = report.passed
        else:
            spec = FilteredAlgebraSpec.from_json(doc)
            x = AlgebraElement.from_json(spec, el)
            res = mc_residual(x)
            if not res.is_zero():
                out = spec.to_json()
                out["curved"] = True
                out["mc_residual"] = res.to_json()
                _emit(json.dumps(out, indent=1) + "\n", output)
                sys.exit(EXIT_FAIL)
            tw = twist_dglie(spec, x)
            out = tw.to_json()
            out["curved"] = False
            ok = not tw.violations()
            out["relations"] = {"passed": ok, "violations": tw.violations()}
    except MCTwistError as exc:
        raise InputError(str(exc)) from None
    _emit(json.dumps(out, indent=1) + "\n", output)
    sys.exit(EXIT_OK if ok else EXIT_FAIL)


def _module_element(mod, doc) -> dict:
    from ..mc.algebra import parse_coeff

    if isinstance(doc, dict):
        doc = doc.get("element", [])
    out = {}
    for j, r in enumerate(doc):
        try:
            out[r["gen"]] = parse_coeff(r["coeff"])
        except KeyError as exc:
            raise InputError(f"element entry {j}: missing field {exc}") from None
    unknown = set(out) - set(mod.index)
    if unknown:
        raise InputError(f"unknown generators in element: {', '.join(sorted(unknown))}")
    return out


# check ------------------------------------------------------------------------------

DSQUARED_CAP = 3
SUITES = ["dsquared", "twstable", "bch", "mc", "defcomplex", "br", "rpl", "gerstmap", "ainfty", "linfty"]
_GENERATORS = {
    "gerst": ["mu", "lambda"],
    "bv": ["mu", "lambda", "delta"],
    "ncgerst": ["1 2", "1-2"],
    "ncbv": ["1 2", "1-2", "1t"],
}


@cli.command()
@click.option("--suite", required=True, type=click.Choice(SUITES))
@click.option("--complex", "complex_id", default=None)
@click.option("--operad", default=None, help="gerst, bv, ncgerst, ncbv (twstable); also rt, bt (mc, defcomplex)")
@click.option("--arity", default=None, help="A..B")
@click.option("--degree", default=None, help="A..B")
@click.option("--black-cap", type=int, default=None)
@click.option("--order", type=int, default=None, help="bch order")
@click.option("--algebra", type=click.Path(), default=None, help="ainfty / linfty: check this algebra instead of random ones")
@click.option("--seed", type=int, default=0, help="seed of the random instances; recorded in the report")
@click.option("--count", type=int, default=10, help="ainfty / linfty: number of random instances")
@click.option("--weight-cap", type=int, default=6)
@click.option("--arity-cap", type=int, default=5)
@click.option("--output", "-o", default=None)
def check(suite, complex_id, operad, arity, degree, black_cap, order, algebra, seed, count, weight_cap, arity_cap, output):
    """Run a named property suite and report pass/fail as JSON."""
    _check_positive(black_cap, "black-cap")
    for value, name in ((count, "count"), (weight_cap, "weight-cap"), (arity_cap, "arity-cap")):
        if value < 1:
            raise InputError(f"--{name} must be positive")
    random_cfg = {"seed": seed, "count": count, "W": weight_cap, "N": arity_cap}
    try:
        report = _run_suite(suite, complex_id, operad, arity, degree, black_cap, order, algebra, random_cfg)
    except InfiniteSliceWithoutCap as exc:
        click.echo(f"error: {exc}; pass --black-cap K", err=True)
        sys.exit(EXIT_TRUNCATION)
    except MCTwistError as exc:
        raise InputError(str(exc)) from None
    report = {"tool": "mctwist", "version": __version__, "suite": suite, "seed": seed, **report}
    _emit(json.dumps(report, indent=1, default=str) + "\n", output)
    sys.exit(EXIT_OK if report["passed"] else EXIT_FAIL)


def _need(value, name):
    if value is None:
        raise InputError(f"this suite needs --{name}")
    return value


def _run_suite(suite, complex_id, operad, arity, degree, black_cap, order, algebra, random_cfg) -> dict:
    from ..operads import checks
    from ..operads.base import d_squared_check, slice_cells
    from ..operads.registry import default_degrees, default_gradings, get_complex

    if suite == "dsquared":
        cx = get_complex(_need(complex_id, "complex"))
        cells = []
        truncated = False
        for n in parse_range(_need(arity, "arity"), "arity"):
            for g in default_gradings(complex_id, n):
                for d in parse_range(degree, "degree") or default_degrees(complex_id, n, g):
                    # d o d needs no enumeration beyond the cell, so truncated windows are checked exactly
                    cap = black_cap if black_cap is not None or cx.black_range(n, d, g) is not None else DSQUARED_CAP
                    ks, exact = slice_cells(cx, n, d, g, cap)
                    truncated |= not exact
                    cells += [(n, d, k, g) for k in ks]
        rep = d_squared_check(cx, cells)
        return {
            "complex": complex_id,
            "black_cap": black_cap if black_cap is not None else (DSQUARED_CAP if truncated else None),
            "truncated": truncated,
            "passed": rep.ok,
            "checked": rep.checked,
            "failures": rep.failures,
        }
    if suite == "twstable":
        op = _need(operad, "operad")
        if op not in _GENERATORS:
            raise UnknownComplex(f"unknown operad {op!r}; known: {', '.join(_GENERATORS)}")
        values = {g: checks.tw_stability_obstruction(op, g) for g in _GENERATORS[op]}
        return {
            "operad": op,
            "passed": not any(values.values()),
            "obstructions": {g: checks.show_obstruction(op, v) for g, v in values.items()},
        }
    if suite == "bch":
        return _bch_associativity(_need(order, "order"))
    if suite == "mc":
        rep = checks.operadic_mc_check(_need(operad, "operad"), 4 if black_cap is None else black_cap)
        return {"operad": operad, "passed": rep.ok, "residual_terms": rep.checked, **rep.detail, "failures": rep.failures}
    if suite == "defcomplex":
        rep = checks.def_complex_identification(_need(operad, "operad"), parse_range(degree, "degree") or range(-6, 1))
        return {"operad": operad, "passed": rep.ok, "checked": rep.checked, "failures": rep.failures}
    if suite == "br":
        sizes = {}
        for n in parse_range(_need(arity, "arity"), "arity"):
            slices = checks.br_subcomplex(n, range(0, (3 if black_cap is None else black_cap) + 1))
            sizes[n] = [len(s.basis) for s in slices]
        return {"passed": True, "basis_sizes_by_black_count": sizes}
    if suite == "rpl":
        from ..mc import multilinear_lie_dimension

        rows = {}
        for n in parse_range(_need(arity, "arity"), "arity"):
            rows[n] = {"kernel": checks.rpl_lie_rank(n), "lyndon": multilinear_lie_dimension(n)}
        return {"passed": all(r["kernel"] == r["lyndon"] for r in rows.values()), "arities": rows}
    if suite == "gerstmap":
        rep = checks.gerst_map_check()
        return {"passed": rep.ok, "properties": rep.detail}
    if suite in ("ainfty", "linfty"):
        from ..homotopy import CurvedAInftyAlgebra, CurvedLInftyAlgebra

        if algebra is not None:
            doc = _read_json(algebra, "algebra")
            alg = (CurvedAInftyAlgebra if suite == "ainfty" else CurvedLInftyAlgebra).from_json(doc)
            rep = alg.check()
            return {"passed": rep.passed, "relations": rep.to_json()}
        return _random_twist_suite(suite, **random_cfg)
    raise InputError(f"unknown suite {suite}")


def _random_twist_suite(suite: str, seed: int, count: int, W: int, N: int) -> dict:
    """Twist random curved instances by random degree-0 elements; both results must satisfy the relations."""
    import random

    from ..homotopy import twist_ainfty, twist_linfty
    from ..homotopy.instances import random_curved_ainfty, random_element
    from ..homotopy.linfty import random_curved_linfty

    rng = random.Random(seed)
    make, twist_fn = (random_curved_ainfty, twist_ainfty) if suite == "ainfty" else (random_curved_linfty, twist_linfty)
    failures = []
    for j in range(count):
        alg = make(rng, W, N)
        a = random_element(alg.module, rng, 0)
        for label, x in (("input", alg), ("twisted", twist_fn(alg, a))):
            rep = x.check()
            if not rep.passed:
                failures.append({"instance": j, "which": label, **rep.to_json()})
    return {"weight_cap": W, "arity_cap": N, "instances": count, "passed": not failures, "failures": failures}


def _bch_associativity(order: int) -> dict:
    from ..mc import FreeLieElement, bch_lie

    x, y, z = (FreeLieElement.letter(c, order) for c in "xyz")
    left = bch_lie(bch_lie(x, y), z)
    right = bch_lie(x, bch_lie(y, z))
    diff = left - right
    return {"order": order, "passed": diff.is_zero(), "nonzero_terms": len(diff.coeffs)}


# bch / gauge / deform ------------------------------------------------------------------


@cli.command()
@click.option("--order", type=int, required=True)
def bch(order):
    """Print BCH(x, y) up to the given order in bracket notation."""
    from ..mc import bch as bch_series

    if order < 1:
        raise InputError("--order must be >= 1")
    click.echo(bch_series(order).to_string())


@cli.command()
@click.option("--algebra", required=True, type=click.Path())
@click.option("--alpha", required=True, type=click.Path(), help="Maurer-Cartan element JSON")
@click.option("--lambda", "lam", required=True, type=click.Path(), help="gauge parameter JSON")
@click.option("--output", "-o", default=None)
def gauge(algebra, alpha, lam, output):
    """Gauge action lambda.alpha by every available formula, with their differences."""
    from ..mc import AlgebraElement, FilteredAlgebraSpec, gauge_routes, mc_residual

    try:
        spec = FilteredAlgebraSpec.from_json(_read_json(algebra, "algebra"))
        a = AlgebraElement.from_json(spec, _read_json(alpha, "alpha"))
        l = AlgebraElement.from_json(spec, _read_json(lam, "lambda"))
        if not mc_residual(a).is_zero():
            raise InputError("alpha is not a Maurer-Cartan element")
        if l.coeffs and (l.min_weight() < 1 or l.degrees() - {0}):
            raise InputError("lambda must have degree 0 and filtration weight >= 1")
        routes = gauge_routes(l, a)
    except MCTwistError as exc:
        raise InputError(str(exc)) from None
    names = list(routes)
    first = routes[names[0]]
    diffs = {f"{n} - {names[0]}": (routes[n] - first).to_json() for n in names[1:]}
    ok = all(not v for v in diffs.values())
    out = {"routes": {n: v.to_json() for n, v in routes.items()}, "differences": diffs, "passed": ok}
    _emit(json.dumps(out, indent=1) + "\n", output)
    sys.exit(EXIT_OK if ok else EXIT_FAIL)


@cli.group()
def deform():
    """Formal deformations of a Maurer-Cartan element."""


@deform.command("extend")
@click.option("--algebra", required=True, type=click.Path())
@click.option("--phi", required=True, type=click.Path())
@click.option("--phi1", required=True, type=click.Path())
@click.option("--order", type=int, required=True)
@click.option("--output-dir", default=".", type=click.Path())
def deform_extend(algebra, phi, phi1, order, output_dir):
    """Extend Phi_1 order by order; writes phi_1.json .. phi_<order>.json."""
    from ..mc import AlgebraElement, FilteredAlgebraSpec, Obstruction, extend_formal_deformation

    try:
        spec = FilteredAlgebraSpec.from_json(_read_json(algebra, "algebra"))
        p = AlgebraElement.from_json(spec, _read_json(phi, "phi"))
        p1 = AlgebraElement.from_json(spec, _read_json(phi1, "phi1"))
        res = extend_formal_deformation(spec, p, p1, order)
    except MCTwistError as exc:
        raise InputError(str(exc)) from None
    if isinstance(res, Obstruction):
        click.echo(json.dumps({"passed": False, "obstruction_order": res.order, "cycle": res.cycle.to_json()}, indent=1))
        sys.exit(EXIT_FAIL)
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    for j, c in enumerate(res, start=1):
        (out / f"phi_{j}.json").write_text(json.dumps({"order": j, "element": c.to_json()}, indent=1) + "\n")
    click.echo(json.dumps({"passed": True, "files": [f"phi_{j}.json" for j in range(1, len(res) + 1)]}))


@deform.command("trivialize")
@click.option("--algebra", required=True, type=click.Path())
@click.option("--phi", required=True, type=click.Path())
@click.option("--coeffs", required=True, multiple=True, type=click.Path(), help="phi_1.json ... in order")
@click.option("--order", type=int, required=True)
def deform_trivialize(algebra, phi, coeffs, order):
    """Find a gauge lambda_1..lambda_order with exp(ad lambda)(delta + phi) = delta + Phi."""
    from ..mc import AlgebraElement, Failure, FilteredAlgebraSpec, gauge_trivialize_formal

    try:
        spec = FilteredAlgebraSpec.from_json(_read_json(algebra, "algebra"))
        p = AlgebraElement.from_json(spec, _read_json(phi, "phi"))
        Phi = [AlgebraElement.from_json(spec, _read_json(c, "coefficient")) for c in coeffs]
        res = gauge_trivialize_formal(spec, p, Phi, order)
    except MCTwistError as exc:
        raise InputError(str(exc)) from None
    if isinstance(res, Failure):
        click.echo(json.dumps({"passed": False, "failure_order": res.order, "cycle": res.cycle.to_json()}, indent=1))
        sys.exit(EXIT_FAIL)
    click.echo(json.dumps({"passed": True, "lambdas": [l.to_json() for l in res]}, indent=1))


def main():
    cli()
