"""Pre-Lie integration: braces, exponential, Magnus logarithm, circle product, gauge action."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from ..errors import (
    FormulaMismatch,
    InvalidAlgebra,
    NoUnit,
    NotGroupLike,
    NotMaurerCartan,
    WeightZeroGaugeInput,
)
from .algebra import DG_LIE, PRE_LIE, AlgebraElement, FilteredAlgebraSpec
from .freelie import bch


def _require_positive_weight(x: AlgebraElement, what: str = "gauge parameter") -> None:
    w = x.min_weight()
    if w is not None and w < 1:
        raise WeightZeroGaugeInput(f"{what} has a component of weight 0")


def _total_weight_exceeds(elems, W: int) -> bool:
    tot = 0
    for e in elems:
        w = e.min_weight()
        if w is None:
            return True
        tot += w
    return tot > W


# braces and the circle product


def symmetric_brace(a: AlgebraElement, args: list[AlgebraElement]) -> AlgebraElement:
    """{a; b1, ..., bn} by the recursive definition, with Koszul signs.

    Arguments are split into homogeneous parts and the brace is extended
    multilinearly.
    """
    alg = a.algebra
    if alg.kind != PRE_LIE:
        raise InvalidAlgebra("symmetric braces need a pre-Lie algebra")
    parts = [list(b.homogeneous_parts().items()) for b in args]
    if any(not p for p in parts):
        return alg.zero()
    memo: dict = {}
    total = alg.zero()

    def rec(choice, k):
        nonlocal total
        if k == len(parts):
            total = total + _brace(a, tuple(choice), memo)
            return
        for d, e in parts[k]:
            choice.append((e, d))
            rec(choice, k + 1)
            choice.pop()

    rec([], 0)
    return total


def _key(e: AlgebraElement):
    return frozenset(e.coeffs.items())


def _brace(a: AlgebraElement, bs: tuple, memo: dict) -> AlgebraElement:
    alg = a.algebra
    if not bs:
        return a
    if a.is_zero() or any(b.is_zero() for b, _ in bs):
        return alg.zero()
    if _total_weight_exceeds([a] + [b for b, _ in bs], alg.W):
        return alg.zero()
    if all(d % 2 == 0 for _, d in bs):
        # even arguments commute inside the brace
        bs = tuple(sorted(bs, key=lambda bd: sorted(bd[0].coeffs.items())))
    key = (_key(a), tuple((_key(b), d) for b, d in bs))
    if key in memo:
        return memo[key]
    n = len(bs)
    bn, dn = bs[-1]
    out = _brace(a, bs[:-1], memo).star(bn)
    for i in range(n - 1):
        between = sum(d for _, d in bs[i + 1 : n - 1])
        sign = -1 if (dn * between) % 2 else 1
        bi, di = bs[i]
        inner = (bi.star(bn), di + dn)
        new = bs[:i] + (inner,) + bs[i + 1 : n - 1]
        out = out - _brace(a, new, memo) * sign
    memo[key] = out
    return out


def _split_group_like(g: AlgebraElement) -> AlgebraElement:
    alg = g.algebra
    if alg.unit is None:
        raise NoUnit("group-like elements need a unit")
    c = g.coeffs.get(alg.unit, Fraction(0))
    if c != 1:
        raise NotGroupLike(f"unit coefficient is {c}, expected 1")
    b = AlgebraElement(alg, {k: v for k, v in g.coeffs.items() if k != alg.unit})
    w = b.min_weight()
    if w is not None and w < 1:
        raise NotGroupLike("g - 1 has a component of weight 0")
    if b.degrees() - {0}:
        raise NotGroupLike("g - 1 must have degree 0")
    return b


def circle_product(a: AlgebraElement, g: AlgebraElement) -> AlgebraElement:
    """a (circle) (1+b) = sum_n {a; b,...,b}/n!, truncated at the weight cap."""
    b = _split_group_like(g)
    alg = a.algebra
    memo: dict = {}
    out = a
    if b.is_zero():
        return a
    wa = a.min_weight()
    if wa is None:
        return a
    wb = b.min_weight()
    n = 1
    while wa + n * wb <= alg.W:
        out = out + _brace(a, tuple((b, 0) for _ in range(n)), memo) * Fraction(1, factorial(n))
        n += 1
    return out


# exponential and logarithm


def prelie_power(lam: AlgebraElement, n: int) -> AlgebraElement:
    """Right-iterated power (..((lam*lam)*lam)..)*lam with n factors."""
    p = lam
    for _ in range(n - 1):
        p = p.star(lam)
    return p


def prelie_exp(lam: AlgebraElement) -> AlgebraElement:
    """1 + lam + lam^2/2! + ..., right-iterated powers, truncated at the weight cap."""
    alg = lam.algebra
    if alg.unit is None:
        raise NoUnit("the pre-Lie exponential needs a unit")
    _require_positive_weight(lam)
    out = alg.one()
    p = lam
    n = 1
    while not p.is_zero():
        out = out + p * Fraction(1, factorial(n))
        p = p.star(lam)
        n += 1
    return out


def _exp_minus_one(lam: AlgebraElement) -> AlgebraElement:
    out = lam.algebra.zero()
    p = lam
    n = 1
    while not p.is_zero():
        out = out + p * Fraction(1, factorial(n))
        p = p.star(lam)
        n += 1
    return out


def prelie_log(g: AlgebraElement) -> AlgebraElement:
    """The inverse of prelie_exp on 1 + (weight >= 1): the pre-Lie Magnus expansion.

    Solved by the fixed point lam = a - sum_{n>=2} lam^n/n!, which gains one
    weight per iteration.
    """
    a = _split_group_like(g)
    alg = g.algebra
    lam = a
    for _ in range(alg.W + 1):
        new = a - (_exp_minus_one(lam) - lam)
        if new == lam:
            break
        lam = new
    return lam


# dg Lie side: brackets, exponentials of ad


def lie_algebra(alg: FilteredAlgebraSpec) -> FilteredAlgebraSpec:
    return alg if alg.kind == DG_LIE else alg.skew_symmetrization()


def ad_exp(lam: AlgebraElement, x: AlgebraElement) -> AlgebraElement:
    """exp(ad_lam)(x) with the algebra's Lie bracket."""
    out = x
    term = x
    n = 1
    while True:
        term = lam.bracket(term) * Fraction(1, n)
        if term.is_zero():
            return out
        out = out + term
        n += 1


def ad_flow(lam: AlgebraElement, x: AlgebraElement) -> AlgebraElement:
    """((id - exp(ad_lam)) / ad_lam)(x) = -sum_{n>=0} ad_lam^n(x)/(n+1)!."""
    out = -x
    term = x
    n = 1
    while True:
        term = lam.bracket(term)
        if term.is_zero():
            return out
        out = out - term * Fraction(1, factorial(n + 1))
        n += 1


def mc_residual(x: AlgebraElement) -> AlgebraElement:
    """dx + x*x (pre-Lie) or dx + [x,x]/2 (dg Lie), truncated at the weight cap."""
    alg = x.algebra
    if alg.kind == PRE_LIE:
        return x.d() + x.star(x)
    return x.d() + x.bracket(x) * Fraction(1, 2)


@dataclass(frozen=True)
class MaurerCartanElement:
    element: AlgebraElement

    def __post_init__(self):
        e = self.element
        if e.degrees() - {-1}:
            raise NotMaurerCartan("Maurer-Cartan elements have degree -1")
        w = e.min_weight()
        if w is not None and w < 1:
            raise NotMaurerCartan("Maurer-Cartan elements need weight >= 1")
        if not mc_residual(e).is_zero():
            raise NotMaurerCartan(f"residual {mc_residual(e)!r}")

    @property
    def algebra(self) -> FilteredAlgebraSpec:
        return self.element.algebra


def bch_eval(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """BCH(x, y) in the algebra's Lie bracket, through the Lyndon form of bch(W)."""
    _require_positive_weight(x)
    _require_positive_weight(y)
    alg = x.algebra
    return bch(max(alg.W, 1)).evaluate(
        {"x": x, "y": y},
        bracket=lambda u, v: u.bracket(v),
        add=lambda u, v: u + v,
        scale=lambda c, u: u * c,
        zero=alg.zero(),
    )


def gauge_routes(lam: AlgebraElement, alpha: AlgebraElement) -> dict[str, AlgebraElement]:
    """The gauge action lam.alpha by every formula available for this algebra.

    flow: (id - exp ad)/ad (d lam) + exp(ad lam)(alpha) in the Lie algebra.
    flow_delta: exp(ad lam)(delta + alpha) - delta with delta adjoined.
    circle: (e^lam * (delta + alpha)) (circle) e^{-lam} - delta, pre-Lie only,
    available when d = 0 or a right_delta is given.
    """
    alg = lam.algebra
    lie = lie_algebra(alg)
    l_lie, a_lie = lam.lift(lie), alpha.lift(lie)
    routes = {"flow": ad_flow(l_lie, l_lie.d()) + ad_exp(l_lie, a_lie)}
    ext = lie.with_delta()
    delta = ext.gen(FilteredAlgebraSpec.DELTA)
    l_ext = lam.lift(ext)
    flow_delta = ad_exp(l_ext, delta + alpha.lift(ext)) - delta
    routes["flow_delta"] = _drop_delta(flow_delta, lie)
    if alg.kind == PRE_LIE and (not alg.differential or alg.right_delta is not None):
        if alg.differential:
            pext = alg.with_delta()
            pdelta = pext.gen(FilteredAlgebraSpec.DELTA)
        else:
            pext = alg
            pdelta = alg.zero()
        lp = lam.lift(pext)
        x = prelie_exp(lp).star(pdelta + alpha.lift(pext))
        circ = circle_product(x, prelie_exp(-lp)) - pdelta
        routes["circle"] = _drop_delta(circ, lie)
    return routes


def _drop_delta(x: AlgebraElement, target: FilteredAlgebraSpec) -> AlgebraElement:
    D = FilteredAlgebraSpec.DELTA
    names = x.algebra.names
    rest = {}
    for k, v in x.coeffs.items():
        if names[k] == D:
            raise FormulaMismatch(f"a multiple {v} of delta survives the gauge action")
        rest[target.index[names[k]]] = v
    return AlgebraElement(target, rest)


def gauge_act_prelie(lam: AlgebraElement, alpha: MaurerCartanElement | AlgebraElement) -> MaurerCartanElement:
    """lam . alpha, checked across all available formulas (FormulaMismatch if they differ)."""
    a = alpha.element if isinstance(alpha, MaurerCartanElement) else alpha
    _require_positive_weight(lam)
    if lam.degrees() - {0}:
        raise WeightZeroGaugeInput("gauge parameters have degree 0")
    routes = gauge_routes(lam, a)
    values = list(routes.values())
    for name, v in routes.items():
        if v.coeffs != values[0].coeffs:
            raise FormulaMismatch(f"route {name} disagrees with {list(routes)[0]}")
    out = AlgebraElement(lam.algebra, values[0].coeffs)
    return MaurerCartanElement(out)
