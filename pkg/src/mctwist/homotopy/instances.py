"""Fixtures and random curved A-infinity / L-infinity instances."""

from __future__ import annotations

import random
from fractions import Fraction

from .ainfty import CLASSICAL, SHIFTED_CURVED, CurvedAInftyAlgebra, twist_ainfty
from .module import GradedModuleSpec, Maps, add_term, clean, ns_circle, ns_star


def free_dg_algebra(gens: list[tuple[str, int, int]], d: dict, W: int, N: int = 5) -> CurvedAInftyAlgebra:
    """Free graded associative algebra on gens (name, degree, weight), no unit, modulo weight > W.

    d maps a generator name to {generator name: coeff} and is extended as a
    derivation.  Returned in the classical (uncurved) variant.
    """
    words = []
    layer = [((g,), deg, wt) for g, deg, wt in gens]
    while layer:
        words += layer
        nxt = []
        for w, deg, wt in layer:
            for g, gd, gw in gens:
                if wt + gw <= W:
                    nxt.append((w + (g,), deg + gd, wt + gw))
        layer = nxt
    name = {w: "".join(w) if all(len(g) == 1 for g, _, _ in gens) else ".".join(w) for w, _, _ in words}
    mod = GradedModuleSpec.from_basis([(name[w], deg, wt) for w, deg, wt in words], W, N)
    idx = {w: mod.index[name[w]] for w, _, _ in words}
    gdeg = {g: deg for g, deg, _ in gens}
    maps: Maps = {}
    for u, _, _ in words:
        for v, _, _ in words:
            if u + v in idx:
                add_term(maps, (idx[u], idx[v]), {idx[u + v]: Fraction(1)})
    for w, _, _ in words:
        img: dict = {}
        pre = 0
        for i, g in enumerate(w):
            for h, c in d.get(g, {}).items():
                nw = w[:i] + (h,) + w[i + 1 :]
                if nw in idx:
                    s = -1 if pre % 2 else 1
                    img[idx[nw]] = img.get(idx[nw], 0) + s * Fraction(c)
            pre += gdeg[g]
        img = {k: v for k, v in img.items() if v}
        if img:
            add_term(maps, (idx[w],), img)
    return CurvedAInftyAlgebra(mod, CLASSICAL, maps)


def two_dim_curved() -> CurvedAInftyAlgebra:
    """A = span(u, v), |u| = -2, |v| = -1, theta = u, d v = u, no higher products."""
    mod = GradedModuleSpec.from_basis([("u", -2, 1), ("v", -1, 1)], 4, 5)
    maps: Maps = {0: {(): {0: Fraction(1)}}, 1: {(1,): {0: Fraction(1)}}}
    return CurvedAInftyAlgebra(mod, "classical-curved", maps)


def random_map(
    mod: GradedModuleSpec,
    rng: random.Random,
    arity: int,
    degree: int,
    min_raise: int,
    density: float,
    coeffs=(-2, -1, 1, 2),
) -> Maps:
    """Random sparse map of the given arity and degree raising weight by >= min_raise."""
    out: Maps = {}
    for key in mod.tuples(arity):
        w = mod.weight(key)
        targets = [o for o in range(mod.dim) if mod.degrees[o] == mod.degree(key) + degree and mod.weights[o] >= w + min_raise]
        for o in targets:
            if rng.random() < density:
                add_term(out, key, {o: Fraction(rng.choice(coeffs), rng.choice((1, 1, 2)))})
    return out


def random_dg_algebra(rng: random.Random, W: int = 6, N: int = 5) -> CurvedAInftyAlgebra:
    """A free dg algebra on one or two generators; d x = c y when there are two."""
    base = rng.choice([-1, -1, 0, 1])
    shape = rng.choice([(1,), (1, 2), (2, 2), (1, 3), (2, 3)])
    if len(shape) == 1:
        return free_dg_algebra([("x", base, shape[0])], {}, W, N)
    gens = [("x", base, shape[0]), ("y", base - 1, shape[1])]
    d = {"x": {"y": rng.choice([1, -1, 2])}} if rng.random() < 0.8 else {}
    return free_dg_algebra(gens, d, W, N)


def gauge_isotopy(alg: CurvedAInftyAlgebra, lam: Maps) -> CurvedAInftyAlgebra:
    """The structure beta with (1 + lam) * alpha = beta (circle) (1 + lam), lam of arities >= 2.

    Works in the shifted picture; beta is solved arity by arity.
    """
    sh = alg.to_shifted()
    mod = sh.module
    N = mod.arity_cap
    if any(n < 2 for n in lam):
        raise ValueError("the isotopy must have components of arity >= 2 only")
    f = dict(lam)
    ident = {1: {(i,): {i: Fraction(1)} for i in range(mod.dim)}}
    lhs = clean({n: dict(t) for n, t in sh.maps.items()})
    for n, t in ns_star(mod, lam, sh.maps, -1, max_arity=N).items():
        for key, v in t.items():
            add_term(lhs, key, v)
    lhs = clean(lhs)
    f_full = dict(f)
    f_full[1] = ident[1]
    beta: Maps = {}
    for n in range(N + 1):
        # beta_n = lhs_n - (terms of beta (circle) f in arity n built from beta_k, k < n)
        cur = ns_circle(mod, beta, f_full, n)
        part = {key: dict(v) for key, v in lhs.get(n, {}).items()}
        for key, v in cur.get(n, {}).items():
            cv = part.setdefault(key, {})
            for o, c in v.items():
                cv[o] = cv.get(o, 0) - c
        for key, v in part.items():
            v = {o: c for o, c in v.items() if c}
            if v:
                add_term(beta, key, v)
    return CurvedAInftyAlgebra(mod, SHIFTED_CURVED if beta.get(0) else sh.variant, clean(beta))


def random_element(mod: GradedModuleSpec, rng: random.Random, degree: int, min_weight: int = 1, density: float = 0.5) -> dict:
    out = {}
    for i in range(mod.dim):
        if mod.degrees[i] == degree and mod.weights[i] >= min_weight and rng.random() < density:
            out[i] = Fraction(rng.choice((-2, -1, 1, 2, 3)), rng.choice((1, 2)))
    return out


def random_curved_ainfty(rng: random.Random, W: int = 6, N: int = 5, curved: bool = True) -> CurvedAInftyAlgebra:
    """Free dg algebra, moved by a random isotopy, then twisted by a random element (shifted).

    The isotopy raises weight by at least one, so every arity-n component
    has output weight >= 2n - 2 and nothing above arity 4 survives at W = 6.
    """
    for _ in range(20):
        base = random_dg_algebra(rng, W, N).to_shifted()
        mod = base.module
        a = random_element(mod, rng, 0)
        if a or not curved:
            break
    lam = random_map(mod, rng, 2, 0, 1, 0.5)
    lam.update(random_map(mod, rng, 3, 0, 1, 0.4))
    alg = gauge_isotopy(base, lam)
    if curved and a:
        alg = twist_ainfty(alg, a)
    return alg


def random_symmetric_map(
    mod: GradedModuleSpec,
    rng: random.Random,
    arity: int,
    degree: int,
    min_raise: int,
    density: float,
    coeffs=(-2, -1, 1, 2),
) -> Maps:
    """Random symmetric map stored on sorted tuples."""
    out: Maps = {}
    for key in mod.sorted_tuples(arity):
        w = mod.weight(key)
        for o in range(mod.dim):
            if mod.degrees[o] == mod.degree(key) + degree and mod.weights[o] >= w + min_raise and rng.random() < density:
                add_term(out, key, {o: Fraction(rng.choice(coeffs), rng.choice((1, 1, 2)))})
    return out


def random_morphism_components(
    mod: GradedModuleSpec,
    rng: random.Random,
    arity_zero: bool = True,
    linear_part: bool = True,
    density: float = 0.4,
) -> Maps:
    """id + (weight-raising symmetric components of arity 1..3), optionally with f_0."""
    comps: Maps = {1: {(i,): {i: Fraction(1)} for i in range(mod.dim)}}
    arities = ([0] if arity_zero else []) + ([1] if linear_part else []) + [2, 3]
    for n in arities:
        part = random_symmetric_map(mod, rng, n, 0, 1, density)
        for key, v in part.get(n, {}).items():
            add_term(comps, key, v)
    return clean(comps)


def sym_gauge_isotopy(alpha, lam: Maps):
    """beta with (id + lam) * alpha = beta (circle) (id + lam), lam of arities >= 2 (L-infinity)."""
    from .linfty import SHIFTED, SHIFTED_CURVED, CurvedLInftyAlgebra
    from .module import add_maps, sym_circle, sym_star

    mod = alpha.module
    N = mod.arity_cap
    if any(n < 2 for n in lam):
        raise ValueError("the isotopy must have components of arity >= 2 only")
    f = clean(dict(lam))
    f[1] = {(i,): {i: Fraction(1)} for i in range(mod.dim)}
    lhs = sym_star(mod, f, alpha.maps, max_arity=N)
    beta: Maps = {}
    for n in range(N + 1):
        cur = sym_circle(mod, beta, f, n)
        part = add_maps({n: lhs.get(n, {})}, {n: cur.get(n, {})}, -1)
        for key, v in part.get(n, {}).items():
            add_term(beta, key, v)
    beta = clean(beta)
    return CurvedLInftyAlgebra(mod, SHIFTED_CURVED if beta.get(0) else alpha.variant, beta)
