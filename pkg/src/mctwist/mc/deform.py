"""Twisted dg Lie algebras and order-by-order formal deformation solvers."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import InvalidAlgebra, InvalidDeformation, NotACycle, NotMaurerCartan
from ..linalg import SparseMatrix, solve
from .algebra import DG_LIE, AlgebraElement, FilteredAlgebraSpec, lc_add
from .prelie import MaurerCartanElement, lie_algebra, mc_residual


def twist_dglie(spec: FilteredAlgebraSpec, omega: MaurerCartanElement | AlgebraElement) -> FilteredAlgebraSpec:
    """Same bracket, differential d + [omega, -]."""
    if spec.kind != DG_LIE:
        raise InvalidAlgebra("twist_dglie needs a dg Lie algebra")
    w = omega.element if isinstance(omega, MaurerCartanElement) else omega
    if w.algebra is not spec:
        w = w.lift(spec)
    if w.degrees() - {-1} or not mc_residual(w).is_zero():
        raise NotMaurerCartan("twisting element is not Maurer-Cartan")
    diff = {}
    for i in range(spec.dim):
        e = {i: Fraction(1)}
        img = spec.d(e)
        lc_add(img, spec.mul(w.coeffs, e))
        if img:
            diff[i] = img
    return spec.with_differential(diff, validate=True)


def twisted_d(phi: AlgebraElement, x: AlgebraElement) -> AlgebraElement:
    return x.d() + phi.bracket(x)


def _matrix(phi: AlgebraElement, src_degree: int) -> tuple[SparseMatrix, list[int], list[int]]:
    """Matrix of d^phi from degree src_degree to src_degree - 1, with the index lists."""
    alg = phi.algebra
    src = [i for i in range(alg.dim) if alg.degrees[i] == src_degree]
    tgt = [i for i in range(alg.dim) if alg.degrees[i] == src_degree - 1]
    pos = {k: r for r, k in enumerate(tgt)}
    cols = []
    for i in src:
        img = twisted_d(phi, alg.basis_element(i))
        cols.append({pos[k]: v for k, v in img.coeffs.items()})
    return SparseMatrix.from_columns(len(tgt), cols) if cols else SparseMatrix(len(tgt), 0), src, tgt


def _solve_twisted(phi: AlgebraElement, rhs: AlgebraElement, src_degree: int) -> AlgebraElement | None:
    """Some x of degree src_degree with d^phi x = rhs, or None."""
    alg = phi.algebra
    m, src, tgt = _matrix(phi, src_degree)
    pos = {k: r for r, k in enumerate(tgt)}
    b = {pos[k]: v for k, v in rhs.coeffs.items()}
    if any(alg.degrees[k] != src_degree - 1 for k in rhs.coeffs):
        return None
    x = solve(m, b)
    if x is None:
        return None
    return AlgebraElement(alg, {src[c]: v for c, v in x.items()})


@dataclass(frozen=True)
class Obstruction:
    """The first order whose equation has no solution, with the offending cycle."""

    order: int
    cycle: AlgebraElement
    solved: list


@dataclass(frozen=True)
class Failure:
    """The first order at which no gauge solves the trivialization equation."""

    order: int
    cycle: AlgebraElement
    solved: list


def _as_lie(spec: FilteredAlgebraSpec, x):
    x = x.element if isinstance(x, MaurerCartanElement) else x
    lie = lie_algebra(spec)
    return lie, (x if x.algebra is lie else x.lift(lie))


def extend_formal_deformation(spec: FilteredAlgebraSpec, phi, phi1: AlgebraElement, order: int):
    """Solve d Phi_n + [phi, Phi_n] + 1/2 sum_{k=1}^{n-1} [Phi_k, Phi_{n-k}] = 0 for n = 2..order.

    Returns [Phi_1, ..., Phi_order] or the first Obstruction.
    """
    lie, p = _as_lie(spec, phi)
    _, f1 = _as_lie(spec, phi1)
    if not mc_residual(p).is_zero():
        raise NotMaurerCartan("phi is not Maurer-Cartan")
    if not twisted_d(p, f1).is_zero():
        raise NotACycle("Phi_1 is not a cycle of the twisted differential")
    coeffs = [f1]
    for n in range(2, order + 1):
        rhs = lie.zero()
        for k in range(1, n):
            rhs = rhs + coeffs[k - 1].bracket(coeffs[n - k - 1])
        rhs = rhs * Fraction(-1, 2)
        x = _solve_twisted(p, rhs, -1)
        if x is None:
            return Obstruction(n, rhs, list(coeffs))
        coeffs.append(x)
    return coeffs


def is_formal_deformation(phi: AlgebraElement, coeffs: list[AlgebraElement]) -> bool:
    for n in range(1, len(coeffs) + 1):
        lhs = twisted_d(phi, coeffs[n - 1])
        acc = phi.algebra.zero()
        for k in range(1, n):
            acc = acc + coeffs[k - 1].bracket(coeffs[n - k - 1])
        if not (lhs + acc * Fraction(1, 2)).is_zero():
            return False
        if coeffs[n - 1].degrees() - {-1}:
            return False
    return True


def _series_bracket(x: list, y: list, order: int) -> list:
    """t-adic bracket of two series given as coefficient lists indexed 0..order."""
    out = [None] * (order + 1)
    alg = x[0].algebra
    for n in range(order + 1):
        acc = alg.zero()
        for k in range(n + 1):
            if not x[k].is_zero() and not y[n - k].is_zero():
                acc = acc + x[k].bracket(y[n - k])
        out[n] = acc
    return out


def exp_ad_series(lam: list, x: list, order: int) -> list:
    """exp(ad_lam)(x) for series with lam[0] = 0, modulo t^{order+1}."""
    out = list(x)
    term = list(x)
    for m in range(1, order + 1):
        term = [c * Fraction(1, m) for c in _series_bracket(lam, term, order)]
        if all(c.is_zero() for c in term):
            break
        out = [a + b for a, b in zip(out, term)]
    return out


def gauge_trivialize_formal(spec: FilteredAlgebraSpec, phi, Phi: list, order: int):
    """Find lam_1..lam_order with exp(ad_lam)(delta + phi) = delta + phi + sum Phi_n t^n.

    Returns the list of lam_n or the first Failure.
    """
    lie, p = _as_lie(spec, phi)
    coeffs = [_as_lie(spec, c)[1] for c in Phi[:order]]
    while len(coeffs) < order:
        coeffs.append(lie.zero())
    if not mc_residual(p).is_zero() or not is_formal_deformation(p, coeffs):
        raise InvalidDeformation("Phi is not a formal deformation of phi")
    ext = lie.with_delta()
    delta = ext.gen(FilteredAlgebraSpec.DELTA)
    base = delta + p.lift(ext)
    lams: list[AlgebraElement] = []
    for n in range(1, order + 1):
        lam_series = [ext.zero()] + [l.lift(ext) for l in lams] + [ext.zero()] * (order - len(lams))
        x = [base] + [ext.zero()] * order
        cur = exp_ad_series(lam_series, x, n)
        c_n = _drop(cur[n], lie)
        rhs = c_n - coeffs[n - 1]
        sol = _solve_twisted(p, rhs, 0)
        if sol is None:
            return Failure(n, rhs, list(lams))
        lams.append(sol)
    return lams


def gauge_series_action(spec: FilteredAlgebraSpec, phi, lams: list, order: int) -> list:
    """Coefficients Phi_1..Phi_order of exp(ad_lam)(delta + phi) - delta - phi."""
    lie, p = _as_lie(spec, phi)
    ext = lie.with_delta()
    delta = ext.gen(FilteredAlgebraSpec.DELTA)
    lam_series = [ext.zero()] + [_as_lie(spec, l)[1].lift(ext) for l in lams[:order]]
    lam_series += [ext.zero()] * (order + 1 - len(lam_series))
    x = [delta + p.lift(ext)] + [ext.zero()] * order
    cur = exp_ad_series(lam_series, x, order)
    return [_drop(c, lie) for c in cur[1:]]


def _drop(x: AlgebraElement, lie: FilteredAlgebraSpec) -> AlgebraElement:
    names = x.algebra.names
    out = {}
    for k, v in x.coeffs.items():
        if names[k] == FilteredAlgebraSpec.DELTA:
            raise InvalidDeformation("delta survives in a gauge coefficient")
        out[lie.index[names[k]]] = v
    return AlgebraElement(lie, out)


def homology_class_nonzero(phi: AlgebraElement, cycle: AlgebraElement, degree: int) -> bool:
    """True when cycle is a d^phi-cycle that is not a d^phi-boundary."""
    if not twisted_d(phi, cycle).is_zero():
        return False
    return _solve_twisted(phi, cycle, degree + 1) is None
