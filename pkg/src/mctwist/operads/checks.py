"""Structural checks on the twisted operads.

  tw_stability_obstruction   ad of the twisting element on a generator of P
  operadic_mc_check          d0 M + M o_1 M = 0 for the twisting element M
  def_complex_identification arity 0 of Tw P against the convolution complex
  br_subcomplex              the brace trees inside Tw BT, with closure checks
  rpl_lie_rank               degree 0 kernel of the differential of rPL
  gerst_map_check            relations of the images of the Gerstenhaber generators
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations

from ..errors import MCTwistError, NotClosed, UnknownComplex
from ..homotopy.convolution import operad_bracket, operad_star, symmetric_operad_star
from ..linalg import SparseMatrix, rank
from .bamboo import W, Bamboo, TadpoleBamboo, TwNcBV, TwNcGerst
from .base import differential_matrix, normalize
from .gerst import FreeGerstModel, t_add
from .graphs import TwGra
from .lincomb import lc_add
from .trees import BLACK, RPL, Br, TwBT, TwSRT, is_brace, parse_tree, tree_text


@dataclass
class CheckReport:
    name: str
    ok: bool
    checked: int = 0
    failures: list = field(default_factory=list)
    detail: dict = field(default_factory=dict)


# Tw-stability ---------------------------------------------------------------

_BAMBOO_OPERADS = {"ncgerst": TwNcGerst, "ncbv": TwNcBV}
_TREE_OPERADS = {"rt": TwSRT, "bt": TwBT}


def tw_stability_obstruction(operad_id: str, generator: str) -> dict:
    """ad_M(nu) = M o_1 nu - (-1)^{|nu|} sum_i nu o_i M for a generator nu of P.

    Bamboo operads take a bamboo without black vertices ("1 2", "1-2", "1t").
    Gerst and BV take "mu", "lambda" or (BV only) "delta"; the value is a
    combination of words of the free model, with M = lambda(alpha, -).
    """
    if operad_id in _BAMBOO_OPERADS:
        cx = _BAMBOO_OPERADS[operad_id]()
        g = cx.parse(generator)
        if cx.black(g):
            raise MCTwistError("generators of the untwisted operad have no black vertices")
        return cx.ad_twist(g)
    if operad_id in ("gerst", "bv"):
        m = FreeGerstModel(operad_id == "bv")
        a = m.alpha()
        x1, x2 = m.gen_x(1), m.gen_x(2)

        def A(z):
            return m.lam(a, z)

        if generator == "mu":
            # |mu| = 0: lambda(alpha, x1 x2) - (A(x1) x2 + x1 A(x2))
            out = m.lam(a, m.mu(x1, x2))
            out = lc_add(out, lc_add(m.mu(A(x1), x2), m.mu(x1, A(x2))), -1)
        elif generator == "lambda":
            out = m.lam(a, m.lam(x1, x2))
            out = lc_add(out, lc_add(m.lam(A(x1), x2), m.lam(x1, A(x2))))
        elif generator == "delta" and m.bv:
            out = lc_add(m.lam(a, m.delta(x1)), m.delta(A(x1)))
        else:
            raise MCTwistError(f"unknown generator {generator!r} of {operad_id}")
        return {w: Fraction(c) for w, c in out.items() if c}
    raise UnknownComplex(f"no Tw-stability obstruction for {operad_id!r}")


def show_obstruction(operad_id: str, lc: dict) -> str:
    if operad_id in _BAMBOO_OPERADS:
        cx = _BAMBOO_OPERADS[operad_id]()
        show = cx.show
    else:
        show = FreeGerstModel(operad_id == "bv").show
    return show_lincomb(lc, show)


def show_lincomb(lc: dict, show) -> str:
    if not lc:
        return "0"
    parts = []
    for g, c in sorted(lc.items(), key=lambda t: show(t[0])):
        parts.append(f"{'+' if c > 0 else '-'} {'' if abs(c) == 1 else str(abs(c)) + '*'}({show(g)})")
    s = " ".join(parts)
    return s[2:] if s.startswith("+ ") else s


# operadic Maurer-Cartan equation -----------------------------------------------


def operadic_mc_check(operad_id: str, black_cap: int = 4) -> CheckReport:
    """d0 M + M o_1 M on the window of black counts <= black_cap + 1.

    M is the twisting element in arity 1: (b-1) + (1-b) for bamboos,
    (b over 1) + (1 over b) for trees, lambda(alpha, x_1) for Gerst and BV.
    Terms of M beyond the cap are dropped; the residual is reported by black
    count, and the check passes when nothing survives at black count <= cap.
    """
    if operad_id in _BAMBOO_OPERADS or operad_id in _TREE_OPERADS:
        cx = (_BAMBOO_OPERADS.get(operad_id) or _TREE_OPERADS[operad_id])()
        M = {g: c for g, c in cx.twist_element().items() if cx.black(g) <= black_cap}
        terms = []
        for m, c in M.items():
            terms += [(h, c * v) for h, v in cx.internal_differential(m).items()]
            for m2, c2 in M.items():
                terms += [(h, c * c2 * v) for h, v in cx.compose(m, 1, m2).items()]
        res = normalize(terms)
        black, show = cx.black, cx.show
    elif operad_id in ("gerst", "bv"):
        m = FreeGerstModel(operad_id == "bv")
        A = m.lam(m.alpha(), m.gen_x(1))
        res = {}
        for w, c in A.items():
            for h, v in m._derivation(w, m.d0factor).items():
                t_add(res, h, c * v)
        for h, v in m.lam(m.alpha(), A).items():
            t_add(res, h, v)
        black, show = m.black, m.show
    else:
        raise UnknownComplex(f"no twisting element for {operad_id!r}")
    by_k: dict = {}
    for h, v in res.items():
        by_k.setdefault(black(h), []).append((show(h), str(v)))
    inside = [k for k in by_k if k <= black_cap]
    return CheckReport(
        "operadic-mc",
        not inside,
        len(res),
        [(k, by_k[k]) for k in sorted(inside)],
        {"residual_black_counts": sorted(by_k), "black_cap": black_cap},
    )


# arity 0 against the deformation complex ---------------------------------------


def _whiten_bamboo(g):
    cols = (W,) * len(g.colors)
    if isinstance(g, TadpoleBamboo):
        return TadpoleBamboo(cols, g.edges, g.tads)
    return Bamboo(cols, g.edges)


def _tree_norm(cx, g) -> dict:
    """Sum over all labellings of the black vertices by 1..k, as white trees."""
    s, o = cx._oriented(g)
    blacks = [v for v, lab in s.labels.items() if lab == BLACK]
    terms = []
    for p in permutations(range(1, len(blacks) + 1)):
        s2 = type(s)(dict(s.labels), {v: list(c) for v, c in s.kids.items()}, s.root)
        for v, j in zip(blacks, p):
            s2.labels[v] = j
        terms.append(cx._canon(s2, o))
    return normalize(terms)


def def_complex_identification(operad_id: str, degrees, tadpoles=range(0, 3)) -> CheckReport:
    """(Tw P)(0) against s^-1 hom(C, P) with the differential [mu, -].

    ncgerst, ncbv: a black-only bamboo goes to the same bamboo with white
    vertices 1..k; mu = (1-2).  rt: a black-only tree goes to the sum over
    all labellings of its black vertices (invariants of RT(k));
    mu = (1 over 2) + (2 over 1).  The arity k = black count, and an element
    of degree d in Tw P(0) has d + 2k edges.  For each basis element g the
    check compares Phi(d g) with [mu, Phi(g)].
    """
    degrees = list(degrees)
    failures = []
    checked = 0
    if operad_id in _BAMBOO_OPERADS:
        cx = _BAMBOO_OPERADS[operad_id]()
        mu = {cx.parse("1-2"): 1}

        def star(f, g):
            return operad_star(f, g, cx.compose, cx.arity)

        gradings = [(t,) for t in tadpoles] if operad_id == "ncbv" else [()]

        def phi(lc):
            return normalize((_whiten_bamboo(h), v) for h, v in lc.items())

        cells = [(d, k, gr) for gr in gradings for d in degrees for k in cx.black_range(0, d, gr)]
    elif operad_id == "rt":
        cx = TwSRT()
        mu = {parse_tree("1(2)"): 1, parse_tree("2(1)"): 1}

        def star(f, g):
            return symmetric_operad_star(f, g, cx.compose, cx.arity, cx.act)

        def phi(lc):
            return normalize((h2, v * v2) for h, v in lc.items() for h2, v2 in _tree_norm(cx, h).items())

        cells = [(d, -d - 1, ()) for d in degrees if -d - 1 >= 1]
    else:
        raise UnknownComplex(f"no deformation complex identification for {operad_id!r}")
    for d, k, gr in cells:
        for g in cx.basis(0, d, k, gr):
            checked += 1
            F = phi({g: 1})
            lhs = phi(cx.differential(g))
            rhs = normalize(operad_bracket(mu, F, len(F) and _edges(cx, next(iter(F))), star).items()) if F else {}
            if lhs != rhs:
                failures.append(cx.show(g))
    return CheckReport("def-complex", not failures, checked, failures, {"operad": operad_id, "degrees": degrees})


def _edges(cx, g) -> int:
    return cx.degree(g) + 2 * cx.black(g)


# braces -----------------------------------------------------------------------


@dataclass
class ChainSlice:
    complex_id: str
    n: int
    d: int
    grading: tuple
    basis: list
    differential_out: SparseMatrix


def br_subcomplex(n: int, black_counts, compose_with: int = 2) -> list:
    """Br slices of arity n for the given black counts.

    Every basis tree is checked to have its Tw BT differential inside Br, and
    its compositions o_i with all Br trees of arity <= compose_with and at
    most one black vertex; NotClosed is raised on a leak.
    """
    br, bt = Br(), TwBT()
    partners = [t for m in range(1, compose_with + 1) for k in (0, 1) for t in br.basis(m, m - 1 - k, k)]
    out = []
    for k in black_counts:
        d = n - 1 - k
        basis = br.basis(n, d, k)
        for g in basis:
            for h in bt.differential(g):
                if not is_brace(h):
                    raise NotClosed(f"d({tree_text(g)}) has the term {tree_text(h)} outside Br")
            for p in partners:
                for i in range(1, n + 1):
                    for h in bt.compose(g, i, p):
                        if not is_brace(h):
                            raise NotClosed(f"{tree_text(g)} o_{i} {tree_text(p)} has the term {tree_text(h)} outside Br")
        out.append(ChainSlice(br.id, n, d, (), basis, differential_matrix(br, n, d, k, ())))
    return out


# rPL ---------------------------------------------------------------------------


def _columns(vectors: list, index: dict) -> dict:
    entries = {}
    for c, vec in enumerate(vectors):
        for h, v in vec.items():
            entries[(index[h], c)] = Fraction(v)
    return entries


def rpl_lie_rank(n: int, k: int = 0) -> int:
    """dim ker(d: rPL(n)_{-k} -> rPL(n)_{-k-1}), rPL(n)_{-k} = C_k / I_k with I the ideal.

    Equal to dim C_k - rank[D | I_{k+1}] + rank I_{k+1} - rank I_k.
    """
    if n < 1:
        raise MCTwistError("rPL needs n >= 1")
    cx = RPL()
    src = cx.basis(n, n - 1 - k, k)
    tgt = cx.basis(n, n - 2 - k, k + 1)
    index = {g: r for r, g in enumerate(tgt)}
    D = [cx.differential(g) for g in src]
    I1 = cx.ideal_basis(n, k + 1)
    I0 = cx.ideal_basis(n, k)
    src_index = {g: r for r, g in enumerate(src)}
    DI = SparseMatrix(len(tgt), len(D) + len(I1), _columns(D + I1, index))
    rI1 = rank(SparseMatrix(len(tgt), len(I1), _columns(I1, index)))
    rI0 = rank(SparseMatrix(len(src), len(I0), _columns(I0, src_index)))
    return len(src) - rank(DI) + rI1 - rI0


# Gerstenhaber relations in Gra, RT and BT ----------------------------------------

_CYCLES = ({1: 1, 2: 2, 3: 3}, {1: 2, 2: 3, 3: 1}, {1: 3, 2: 1, 3: 2})


def _act_lc(cx, lc: dict, perm: dict) -> dict:
    terms = []
    for h, v in lc.items():
        h2, s = cx.act(h, perm)
        terms.append((h2, s * v))
    return normalize(terms)


def _compose_lc(cx, f: dict, i: int, g: dict) -> dict:
    return normalize((h, a * b * v) for x, a in f.items() for y, b in g.items() for h, v in cx.compose(x, i, y).items())


def _sum(*lcs) -> dict:
    return normalize(t for lc in lcs for t in lc.items())


def gerst_map_check() -> CheckReport:
    """mu -> two vertices without edge and lambda -> the edge graph in Gra; the binary
    shifted Lie generator -> (1 over 2) + (2 over 1) in RT and BT."""
    results = {}
    gra = TwGra()
    mu = {gra.parse("n=2 k=0 :"): 1}
    lam = {gra.parse("n=2 k=0 : 1-2"): 1}
    swap = {1: 2, 2: 1}
    results["gra: mu commutative"] = _act_lc(gra, mu, swap) == mu
    results["gra: lambda symmetric"] = _act_lc(gra, lam, swap) == lam
    results["gra: mu associative"] = _compose_lc(gra, mu, 1, mu) == _compose_lc(gra, mu, 2, mu)
    lhs = _compose_lc(gra, lam, 1, mu)
    rhs = _sum(_compose_lc(gra, mu, 2, lam), _act_lc(gra, _compose_lc(gra, mu, 1, lam), {1: 1, 2: 3, 3: 2}))
    results["gra: Leibniz"] = lhs == rhs
    ll = _compose_lc(gra, lam, 1, lam)
    results["gra: Jacobi"] = ll != {} and _sum(*(_act_lc(gra, ll, c) for c in _CYCLES)) == {}
    for name, cx in (("rt", TwSRT()), ("bt", TwBT())):
        ell = {parse_tree("1(2)"): 1, parse_tree("2(1)"): 1}
        results[f"{name}: bracket symmetric"] = _act_lc(cx, ell, swap) == ell
        ll = _compose_lc(cx, ell, 1, ell)
        results[f"{name}: shifted Jacobi"] = ll != {} and _sum(*(_act_lc(cx, ll, c) for c in _CYCLES)) == {}
    failures = [k for k, v in results.items() if not v]
    return CheckReport("gerst-map", not failures, len(results), failures, results)


__all__ = [
    "ChainSlice",
    "CheckReport",
    "br_subcomplex",
    "def_complex_identification",
    "gerst_map_check",
    "operadic_mc_check",
    "rpl_lie_rank",
    "show_lincomb",
    "show_obstruction",
    "tw_stability_obstruction",
]
