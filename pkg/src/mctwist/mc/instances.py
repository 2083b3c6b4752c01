"""Concrete filtered algebras: fixtures and random families used by tests and the CLI."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product as iproduct
from typing import Sequence

from .algebra import DG_LIE, PRE_LIE, AlgebraElement, FilteredAlgebraSpec, lc_add

# free pre-Lie algebra on rooted trees


def _tree_str(t) -> str:
    label, kids = t
    if not kids:
        return label
    return label + "[" + ",".join(_tree_str(k) for k in kids) + "]"


def _tree_size(t) -> int:
    return 1 + sum(_tree_size(k) for k in t[1])


def _grafts(t, s) -> list:
    """All trees obtained by attaching s as a new child of one vertex of t."""
    label, kids = t
    out = [(label, tuple(sorted(kids + (s,))))]
    for i, k in enumerate(kids):
        for g in _grafts(k, s):
            out.append((label, tuple(sorted(kids[:i] + (g,) + kids[i + 1 :]))))
    return out


def rooted_tree_prelie(generators: Sequence[str] = ("a",), W: int = 6) -> FilteredAlgebraSpec:
    """Free pre-Lie algebra on degree-0 generators (trees, x*y grafts y onto x), with a unit.

    The unit acts by 1*T = T and T*1 = (|T|+1) T, the unique right action
    compatible with right symmetry.  Weight is the number of vertices.
    """
    gens = [(g, ()) for g in generators]
    layers = [set(gens)]
    for _ in range(W - 1):
        nxt = set()
        for t in layers[-1]:
            for g in gens:
                nxt.update(_grafts(t, g))
        layers.append(nxt)
    trees = sorted((t for layer in layers for t in layer), key=lambda t: (_tree_size(t), _tree_str(t)))
    names = {t: _tree_str(t) for t in trees}
    basis = [("1", 0, 0)] + [(names[t], 0, _tree_size(t)) for t in trees]
    prod: dict = {("1", "1"): {"1": 1}}
    for t in trees:
        prod[("1", names[t])] = {names[t]: 1}
        prod[(names[t], "1")] = {names[t]: _tree_size(t) + 1}
        for s in trees:
            if _tree_size(t) + _tree_size(s) > W:
                continue
            res: dict = {}
            for g in _grafts(t, s):
                res[names[g]] = res.get(names[g], 0) + 1
            prod[(names[t], names[s])] = res
    return FilteredAlgebraSpec(basis, PRE_LIE, prod, {}, "1", W, validate=False)


# associative algebra of upper triangular matrices


def upper_triangular(n: int, W: int) -> FilteredAlgebraSpec:
    """Span of the identity and E_ij (i < j), weight j - i, as an associative hence pre-Lie algebra."""
    basis = [("I", 0, 0)] + [(f"E{i}{j}", 0, j - i) for i in range(n) for j in range(i + 1, n) if j - i <= W]
    names = {b[0] for b in basis}
    prod: dict = {("I", "I"): {"I": 1}}
    for b in basis[1:]:
        prod[("I", b[0])] = {b[0]: 1}
        prod[(b[0], "I")] = {b[0]: 1}
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                a, b, c = f"E{i}{j}", f"E{j}{k}", f"E{i}{k}"
                if {a, b, c} <= names:
                    prod[(a, b)] = {c: 1}
    return FilteredAlgebraSpec(basis, PRE_LIE, prod, {}, "I", W, validate=False)


# convolution pre-Lie algebras Hom(T(V), V)


def _map_name(out: str, ins: tuple) -> str:
    return f"{out}|{','.join(ins)}"


def convolution_prelie(
    V: Sequence[tuple[str, int, int]],
    max_arity: int,
    W: int,
    dV: dict | None = None,
    validate: bool = False,
) -> FilteredAlgebraSpec:
    """Multilinear maps V^n -> V (1 <= n <= max_arity) with f*g = sum_i f o_i g.

    A map sending (v_1..v_n) to w has degree |w| - sum|v_i| and weight
    wt(w) - sum wt(v_i) + n - 1; only weights in 0..W are kept.  The unit is
    the identity map, which replaces the basis map of the first generator.
    With a differential dV on V, the algebra differential is [dV, -] and
    right_delta(f) = f * dV.
    """
    deg = {v: d for v, d, _ in V}
    wt = {v: w for v, _, w in V}
    vnames = [v for v, _, _ in V]
    keys = []
    for n in range(1, max_arity + 1):
        for ins in iproduct(vnames, repeat=n):
            for o in vnames:
                w = wt[o] - sum(wt[i] for i in ins) + n - 1
                if 0 <= w <= W:
                    keys.append((o, ins))
    kdeg = {k: deg[k[0]] - sum(deg[i] for i in k[1]) for k in keys}
    kwt = {k: wt[k[0]] - sum(wt[i] for i in k[1]) + len(k[1]) - 1 for k in keys}
    keyset = set(keys)

    def old_mul(x: dict, y: dict) -> dict:
        out: dict = {}
        for (o, ins), a in x.items():
            for (p, ks), b in y.items():
                if kwt[(o, ins)] + kwt[(p, ks)] > W or len(ins) + len(ks) - 1 > max_arity:
                    continue
                gdeg = kdeg[(p, ks)]
                pre = 0
                for j, i in enumerate(ins):
                    if i == p:
                        new = (o, ins[:j] + ks + ins[j + 1 :])
                        if new in keyset:
                            s = -1 if (gdeg * pre) % 2 else 1
                            out[new] = out.get(new, 0) + s * a * b
                    pre += deg[i]
        return {k: v for k, v in out.items() if v}

    v0 = vnames[0]
    unit_key = (v0, (v0,))
    idmap = {(v, (v,)): Fraction(1) for v in vnames}

    def expand(k):
        return idmap if k == "id" else {k: Fraction(1)}

    def to_new(x: dict) -> dict:
        out: dict = {}
        for k, c in x.items():
            if k == unit_key:
                out["id"] = out.get("id", 0) + c
                for v in vnames[1:]:
                    kk = (v, (v,))
                    out[kk] = out.get(kk, 0) - c
            else:
                out[k] = out.get(k, 0) + c
        return {k: v for k, v in out.items() if v}

    new_keys = ["id"] + [k for k in keys if k != unit_key]

    def name(k):
        return "id" if k == "id" else _map_name(*k)

    basis = [("id", 0, 0)] + [(name(k), kdeg[k], kwt[k]) for k in new_keys[1:]]
    prod = {}
    for a in new_keys:
        for b in new_keys:
            res = to_new(old_mul(expand(a), expand(b)))
            if res:
                prod[(name(a), name(b))] = {name(k): v for k, v in res.items()}
    diff = {}
    rdelta = None
    if dV:
        dv_elem: dict = {}
        for v, img in dV.items():
            for w, c in img.items():
                dv_elem[(w, (v,))] = dv_elem.get((w, (v,)), 0) + Fraction(c)
        rdelta = {}
        for a in new_keys:
            ea = expand(a)
            right = old_mul(ea, dv_elem)
            left = old_mul(dv_elem, ea)
            da = dict(left)
            if a != "id":
                lc_add(da, right, -((-1) ** (kdeg[a] % 2)))
            res = to_new(da) if a != "id" else {}
            if res:
                diff[name(a)] = {name(k): v for k, v in res.items()}
            if a != "id":
                r = to_new(right)
                if r:
                    rdelta[name(a)] = {name(k): v for k, v in r.items()}
    return FilteredAlgebraSpec(basis, PRE_LIE, prod, diff, "id", W, rdelta, validate=validate)


# small dg Lie fixtures


def three_dim_dglie(W: int = 4) -> FilteredAlgebraSpec:
    """e1, e2 odd of weight 1, e3 = [e1,e1] = [e1,e2] of degree -2, d e1 = e3."""
    basis = [("e1", -1, 1), ("e2", -1, 1), ("e3", -2, 2)]
    prod = {("e1", "e1"): {"e3": 1}, ("e1", "e2"): {"e3": 1}, ("e2", "e1"): {"e3": 1}}
    return FilteredAlgebraSpec(basis, DG_LIE, prod, {"e1": {"e3": 1}}, None, W)


def obstructed_dglie() -> FilteredAlgebraSpec:
    """x odd with [x,x] = y and d = 0: the class of [x,x]/2 obstructs extending x."""
    basis = [("x", -1, 1), ("y", -2, 2)]
    return FilteredAlgebraSpec(basis, DG_LIE, {("x", "x"): {"y": 1}}, {}, None, 4)


def unobstructed_dglie() -> FilteredAlgebraSpec:
    """[x,x] = y = du, so H_{-2} = 0 and every cycle extends."""
    basis = [("x", -1, 1), ("u", -1, 2), ("y", -2, 2)]
    return FilteredAlgebraSpec(basis, DG_LIE, {("x", "x"): {"y": 1}}, {"u": {"y": 1}}, None, 4)


def rigid_dglie() -> FilteredAlgebraSpec:
    """H_{-1} = 0: d a0 = b, d a1 = b1, [a0, b] = b1."""
    basis = [("a0", 0, 1), ("b", -1, 1), ("a1", 0, 2), ("b1", -1, 2)]
    prod = {("a0", "b"): {"b1": 1}, ("b", "a0"): {"b1": -1}}
    return FilteredAlgebraSpec(basis, DG_LIE, prod, {"a0": {"b": 1}, "a1": {"b1": 1}}, None, 3)


# random elements and instances


def random_element(
    alg: FilteredAlgebraSpec,
    rng: random.Random,
    degree: int | None = 0,
    min_weight: int = 1,
    density: float = 0.5,
    coeffs: Sequence[int] = (-2, -1, 1, 2, 3),
) -> AlgebraElement:
    out = {}
    for i in range(alg.dim):
        if i == alg.unit:
            continue
        if degree is not None and alg.degrees[i] != degree:
            continue
        if alg.weights[i] < min_weight:
            continue
        if rng.random() < density:
            out[i] = Fraction(rng.choice(coeffs), rng.choice((1, 1, 2, 3)))
    return AlgebraElement(alg, out)


def random_graded_module(rng: random.Random) -> tuple[list, dict]:
    """A two-dimensional graded module q -> p with d q = p (or d = 0).

    p has weight 1 and q weight 0, so no product of non-unit maps can
    produce the identity; that keeps the delta extension a pre-Lie algebra.
    """
    base = rng.choice([0, 1])
    V = [("p", base - 1, 1), ("q", base, 0)]
    dV = {"q": {"p": 1}} if rng.random() < 0.8 else {}
    return V, dV


def random_prelie_instance(rng: random.Random, W: int) -> FilteredAlgebraSpec:
    """One of: rooted trees, upper triangular matrices, a convolution algebra."""
    kind = rng.choice(["trees", "matrices", "convolution"])
    if kind == "trees":
        gens = ("a",) if W > 5 else ("a", "b")
        return rooted_tree_prelie(gens, W)
    if kind == "matrices":
        return upper_triangular(rng.choice([4, 5]), W)
    V, dV = random_graded_module(rng)
    return convolution_prelie(V, 3, W, dV)


def degree_zero_nonunit(alg: FilteredAlgebraSpec) -> bool:
    return any(alg.degrees[i] == 0 and alg.weights[i] >= 1 for i in range(alg.dim) if i != alg.unit)


def random_mc(alg: FilteredAlgebraSpec, rng: random.Random, tries: int = 12, gauge: bool = True):
    """A random Maurer-Cartan element: grow a sum of degree -1 terms while the
    residual stays zero, then move it along a random gauge orbit."""
    from .prelie import MaurerCartanElement, gauge_act_prelie, mc_residual

    odd = [i for i in range(alg.dim) if alg.degrees[i] == -1 and alg.weights[i] >= 1]
    x = alg.zero()
    for _ in range(tries if odd else 0):
        i = rng.choice(odd)
        y = x + alg.basis_element(i) * Fraction(rng.choice((-2, -1, 1, 3)), rng.choice((1, 2)))
        if mc_residual(y).is_zero():
            x = y
    alpha = MaurerCartanElement(x)
    if gauge and alg.unit is not None:
        lam = random_element(alg, rng, 0, 1)
        if not lam.is_zero():
            alpha = gauge_act_prelie(lam, alpha)
    return alpha
