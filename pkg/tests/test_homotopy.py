import itertools
import json
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from mctwist.errors import CurvatureNotUnital, FormulaMismatch, InvalidAlgebra, SourceTargetMismatch, WeightZeroTwist
from mctwist.homotopy import (
    CLASSICAL,
    CLASSICAL_CURVED,
    SHIFTED,
    SHIFTED_CURVED,
    ConvolutionElement,
    CurvedAInftyAlgebra,
    CurvedLInftyAlgebra,
    GradedModuleSpec,
    InftyMorphism,
    check_curved_ainfty,
    check_curved_linfty,
    decode,
    dolgushev_rogers_compose,
    dual_of_curvature,
    encode,
    from_dglie,
    homotopy_identity_residual,
    identity_isotopy,
    infty_compose,
    is_infty_morphism,
    kp_residual,
    kp_trivialize,
    mc_residual_ainfty,
    mc_residual_linfty,
    morphism_residual,
    strict_morphism,
    symmetrize,
    twist_additivity_check,
    twist_ainfty,
    twist_linfty,
    twist_morphism,
)
from mctwist.homotopy.instances import (
    free_dg_algebra,
    random_curved_ainfty,
    random_element,
    random_map,
    random_morphism_components,
    random_symmetric_map,
    sym_gauge_isotopy,
    two_dim_curved,
)
from mctwist.homotopy.kp import contracting_homotopy, insert_curvature
from mctwist.homotopy.module import add_maps, koszul_sort, ns_star, sym_value
from mctwist.mc import twist_dglie
from mctwist.mc.instances import random_mc, three_dim_dglie

SEEDS = st.integers(min_value=0, max_value=10**6)


def neg(lc):
    return {k: -v for k, v in lc.items()}


def apply_map(alg, key):
    return dict(alg.maps.get(len(key), {}).get(key, {}))


def lc_sum(*lcs):
    out = {}
    for lc in lcs:
        for k, v in lc.items():
            out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v}


def lc_scale(lc, c):
    return {k: c * v for k, v in lc.items() if c * v}


def perturbed(alg, rng):
    """Change one structure constant of arity >= 1 by a nonzero amount."""
    entries = [(n, key, o) for n, t in alg.maps.items() if n for key, v in t.items() for o in v]
    n, key, o = rng.choice(sorted(entries))
    maps = {m: {k: dict(v) for k, v in t.items()} for m, t in alg.maps.items()}
    maps[n][key][o] += 1
    if not maps[n][key][o]:
        maps[n][key][o] = Fraction(1, 3)
    return CurvedAInftyAlgebra(alg.module, alg.variant, maps)


def dg_xy():
    """Free algebra on x (deg -1, wt 1), y (deg -2, wt 2) with d x = y."""
    return free_dg_algebra([("x", -1, 1), ("y", -2, 2)], {"x": {"y": 1}}, 5, 5)


# relation checks


def test_dg_algebra_passes():
    alg = dg_xy()
    rep = check_curved_ainfty(alg)
    assert rep.passed and rep.worst_arity is None
    assert rep.checked_arities == tuple(range(10))
    assert alg.to_shifted().check().passed


def test_non_associative_product_flagged_at_arity_three():
    alg = free_dg_algebra([("x", 0, 1)], {}, 4, 4)
    mod = alg.module
    i = mod.index
    maps = {n: {k: dict(v) for k, v in t.items()} for n, t in alg.maps.items()}
    # (x.x).x stays xxx while x.(x.x) becomes 2 xxx
    maps[2][(i["x"], i["xx"])] = {i["xxx"]: Fraction(2)}
    bad = CurvedAInftyAlgebra(mod, CLASSICAL, maps)
    rep = bad.check()
    assert not rep.passed
    assert set(rep.residual_counts) == {3}
    assert rep.worst_arity == 3
    assert not bad.to_shifted().check().passed


def test_two_dim_curved_example_passes():
    alg = two_dim_curved()
    assert alg.curvature == {0: 1}
    assert alg.check().passed
    # direct evaluation: d(theta) = d(u) = 0 and d(d(v)) = d(u) = 0; theta has no other relations
    assert apply_map(alg, (0,)) == {}
    assert apply_map(alg, (1,)) == {0: 1}


def test_curvature_that_is_not_closed_fails():
    mod = GradedModuleSpec.from_basis([("u", -2, 1), ("v", -1, 1)], 4, 3)
    # theta must have degree -2
    with pytest.raises(InvalidAlgebra):
        CurvedAInftyAlgebra(mod, CLASSICAL_CURVED, {0: {(): {1: Fraction(1)}}})
    # d(theta) = v is not zero
    mod = GradedModuleSpec.from_basis([("u", -2, 1), ("v", -3, 2)], 4, 3)
    alg = CurvedAInftyAlgebra(mod, CLASSICAL_CURVED, {0: {(): {0: Fraction(1)}}, 1: {(0,): {1: Fraction(1)}}})
    rep = alg.check()
    assert set(rep.residual_counts) == {0}


def test_uncurved_variant_rejects_curvature():
    mod = GradedModuleSpec.from_basis([("u", -2, 1)], 3, 3)
    with pytest.raises(InvalidAlgebra):
        CurvedAInftyAlgebra(mod, CLASSICAL, {0: {(): {0: Fraction(1)}}})


def test_weight_lowering_map_rejected():
    mod = GradedModuleSpec.from_basis([("a", -1, 2), ("b", -2, 1)], 3, 3)
    with pytest.raises(InvalidAlgebra):
        CurvedAInftyAlgebra(mod, CLASSICAL, {1: {(0,): {1: Fraction(1)}}})


def test_wrong_degree_rejected():
    mod = GradedModuleSpec.from_basis([("a", 0, 1), ("b", 0, 2)], 3, 3)
    with pytest.raises(InvalidAlgebra):
        CurvedAInftyAlgebra(mod, CLASSICAL, {1: {(0,): {1: Fraction(1)}}})


def test_module_invariants():
    with pytest.raises(InvalidAlgebra):
        GradedModuleSpec.from_basis([("a", 0, -1)], 3, 3)
    with pytest.raises(InvalidAlgebra):
        GradedModuleSpec.from_basis([("a", 0, 1)], 3, 1)
    with pytest.raises(InvalidAlgebra):
        GradedModuleSpec.from_basis([("a", 0, 1), ("a", 1, 1)], 3, 3)


def test_random_instances_pass_and_perturbations_fail():
    rng = random.Random(11)
    caught = 0
    for _ in range(20):
        alg = random_curved_ainfty(rng)
        assert alg.check().passed
        assert alg.to_classical().check().passed
        bad = perturbed(alg, rng)
        shifted_fails = not bad.check().passed
        assert shifted_fails == (not bad.to_classical().check().passed)
        caught += shifted_fails
    assert caught >= 15


def test_classical_and_shifted_checkers_agree_on_classical_perturbations():
    rng = random.Random(5)
    for _ in range(15):
        alg = random_curved_ainfty(rng).to_classical()
        bad = perturbed(alg, rng)
        assert bad.check().passed == bad.to_shifted().check().passed


def test_report_json():
    rep = dg_xy().check().to_json()
    assert rep["passed"] is True and rep["residual_counts"] == {}


# transport and serialization


def test_transport_round_trip():
    rng = random.Random(2)
    for _ in range(10):
        alg = random_curved_ainfty(rng)
        assert alg.to_classical().to_shifted() == alg
        c = alg.to_classical()
        assert c.to_shifted().to_classical() == c


def test_transport_low_arity_signs():
    # m~_1(sx) = s m_1(x) and m~_2(sx, sy) = (-1)^{1 + |x|} s m_2(x, y)
    alg = dg_xy()
    sh = alg.to_shifted()
    i = alg.module.index
    assert apply_map(sh, (i["x"],)) == apply_map(alg, (i["x"],))
    assert apply_map(sh, (i["x"], i["y"])) == lc_scale(apply_map(alg, (i["x"], i["y"])), 1)
    assert apply_map(sh, (i["y"], i["x"])) == lc_scale(apply_map(alg, (i["y"], i["x"])), -1)


def test_to_variant_dictionary():
    alg = dg_xy()
    assert alg.to_variant(SHIFTED).variant == SHIFTED
    assert alg.to_variant(CLASSICAL_CURVED).variant == CLASSICAL_CURVED
    curved = two_dim_curved()
    with pytest.raises(InvalidAlgebra):
        curved.to_variant(CLASSICAL)


def test_ainfty_json_round_trip():
    rng = random.Random(8)
    alg = random_curved_ainfty(rng)
    doc = json.loads(json.dumps(alg.to_json()))
    assert doc["structure"] == "ainfty"
    assert CurvedAInftyAlgebra.from_json(doc) == alg
    assert CurvedAInftyAlgebra.from_json(json.dumps(alg.to_classical().to_json())) == alg.to_classical()


def test_ainfty_json_malformed():
    doc = dg_xy().to_json()
    doc["maps"] = [{"arity": 2, "inputs": ["x"], "output": []}]
    with pytest.raises(InvalidAlgebra):
        CurvedAInftyAlgebra.from_json(doc)
    doc["maps"] = [{"arity": 1, "inputs": ["nope"], "output": []}]
    with pytest.raises(InvalidAlgebra):
        CurvedAInftyAlgebra.from_json(doc)


# twisting


def test_twist_by_zero_is_identity():
    rng = random.Random(4)
    for alg in (dg_xy(), two_dim_curved(), random_curved_ainfty(rng)):
        tw = twist_ainfty(alg, {})
        assert tw.maps == alg.maps


def test_twisted_differential_on_dg_algebra():
    alg = dg_xy()
    mod = alg.module
    a = mod.lc({"x": 1, "y": 0})
    tw = twist_ainfty(alg, a)
    # d^a(z) = d z + m2(a, z) - (-1)^{|z|} m2(z, a); the last term is m2(-, a) applied to z as an operator
    for z in range(mod.dim):
        expect = apply_map(alg, (z,))
        for k, c in a.items():
            expect = lc_sum(expect, lc_scale(apply_map(alg, (k, z)), c))
            sign = -1 if mod.degrees[z] % 2 else 1
            expect = lc_sum(expect, lc_scale(apply_map(alg, (z, k)), -sign * c))
        assert apply_map(tw, (z,)) == expect


def test_twisted_curvature_formula():
    alg = dg_xy()
    mod = alg.module
    i = mod.index
    a = {i["x"]: Fraction(2)}
    # theta^a = d a + a a = 2 y + 4 xx
    assert mc_residual_ainfty(alg, a) == {i["y"]: 2, i["xx"]: 4}
    assert twist_ainfty(alg, a).curvature == mc_residual_ainfty(alg, a)


def test_uncurved_zero_residual():
    assert mc_residual_ainfty(dg_xy(), {}) == {}


def test_cocycle_with_zero_square_is_mc():
    # x of degree -1 with d x = 0 and x.x = 0: exterior-type square zero via W = 1
    alg = free_dg_algebra([("x", -1, 1)], {}, 1, 3)
    assert mc_residual_ainfty(alg, {0: Fraction(5)}) == {}


def brute_force_curvature(alg, a):
    """theta + sum_n m_n(a, ..., a), summing over every input tuple from the support of a."""
    out = dict(alg.curvature)
    supp = sorted(a)
    for n in range(1, alg.module.arity_cap + 1):
        for key in itertools.product(supp, repeat=n):
            c = Fraction(1)
            for k in key:
                c *= a[k]
            if alg.module.weight(key) <= alg.module.truncation_weight:
                out = lc_sum(out, lc_scale(apply_map(alg, key), c))
    return out


def test_residual_matches_brute_force_sum():
    rng = random.Random(21)
    for _ in range(15):
        alg = random_curved_ainfty(rng)
        a = random_element(alg.module, rng, 0)
        assert mc_residual_ainfty(alg, a) == brute_force_curvature(alg, a)
        c = alg.to_classical()
        ca = random_element(c.module, rng, -1)
        assert mc_residual_ainfty(c, ca) == brute_force_curvature(c, ca)


def test_twisting_errors():
    alg = dg_xy()
    mod = GradedModuleSpec.from_basis([("x", -1, 0), ("y", -2, 1)], 3, 3)
    zero_wt = CurvedAInftyAlgebra(mod, CLASSICAL, {1: {(0,): {1: Fraction(1)}}})
    with pytest.raises(WeightZeroTwist):
        twist_ainfty(zero_wt, {0: 1})
    with pytest.raises(InvalidAlgebra):
        twist_ainfty(alg, {alg.module.index["y"]: 1})


def test_twist_output_passes_and_commutes_with_transport():
    rng = random.Random(31)
    for _ in range(12):
        alg = random_curved_ainfty(rng)
        a = random_element(alg.module, rng, 0)
        tw = twist_ainfty(alg, a)
        assert tw.check().passed
        classical = twist_ainfty(alg.to_classical(), a)
        assert classical.check().passed
        assert classical.to_shifted().maps == tw.maps


def test_additivity_cases():
    rng = random.Random(41)
    alg = random_curved_ainfty(rng)
    a = random_element(alg.module, rng, 0)
    assert twist_additivity_check(alg, a, {})
    assert twist_additivity_check(alg, a, neg(a))
    assert twist_ainfty(twist_ainfty(alg, a), neg(a)).maps == alg.maps
    for _ in range(10):
        alg = random_curved_ainfty(rng)
        a, b = random_element(alg.module, rng, 0), random_element(alg.module, rng, 0)
        assert twist_additivity_check(alg, a, b)
        c = alg.to_classical()
        assert twist_additivity_check(c, random_element(c.module, rng, -1), random_element(c.module, rng, -1))


def test_mc_iff_twisted_curvature_vanishes():
    rng = random.Random(51)
    for _ in range(10):
        base = random_curved_ainfty(rng, curved=False)
        b = random_element(base.module, rng, 0)
        alg = twist_ainfty(base, b)
        # -b untwists an uncurved algebra, so it is Maurer-Cartan in alg
        assert mc_residual_ainfty(alg, neg(b)) == {}
        assert twist_ainfty(alg, neg(b)).curvature == {}
        c = random_element(alg.module, rng, 0)
        assert (mc_residual_ainfty(alg, c) == {}) == (twist_ainfty(alg, c).curvature == {})


# L-infinity


def test_linfty_validation():
    mod = GradedModuleSpec.from_basis([("a", 0, 1), ("b", -1, 2)], 3, 3)
    assert CurvedLInftyAlgebra(mod, SHIFTED, {2: {(0, 0): {1: Fraction(1)}}}).maps
    with pytest.raises(InvalidAlgebra):
        CurvedLInftyAlgebra(mod, "classical", {})
    with pytest.raises(InvalidAlgebra):
        CurvedLInftyAlgebra(mod, SHIFTED, {2: {(1, 0): {1: Fraction(1)}}})
    with pytest.raises(InvalidAlgebra):
        CurvedLInftyAlgebra(mod, SHIFTED, {0: {(): {1: Fraction(1)}}})
    assert CurvedLInftyAlgebra(mod, SHIFTED_CURVED, {0: {(): {1: Fraction(1)}}}).check().passed


def test_symmetrize_commutative_product_doubles():
    mod = GradedModuleSpec.from_basis([("p", 0, 1), ("q", 0, 1), ("r", -1, 2)], 3, 3)
    r = {2: Fraction(1)}
    m2 = {(0, 0): r, (0, 1): r, (1, 0): r, (1, 1): {2: Fraction(3)}}
    alg = CurvedAInftyAlgebra(mod, SHIFTED, {2: m2})
    assert alg.check().passed
    ell = symmetrize(alg)
    assert ell.maps == {2: {(0, 0): {2: 2}, (0, 1): {2: 2}, (1, 1): {2: 6}}}
    assert ell.check().passed


def brute_symmetrize_value(sh, key):
    """sum over permutations of m~(x_sigma) with the Koszul sign of odd transpositions."""
    mod = sh.module
    out = {}
    for perm in itertools.permutations(range(len(key))):
        s = 1
        for i in range(len(perm)):
            for j in range(i + 1, len(perm)):
                if perm[i] > perm[j] and mod.degrees[key[perm[i]]] % 2 and mod.degrees[key[perm[j]]] % 2:
                    s = -s
        out = lc_sum(out, lc_scale(apply_map(sh, tuple(key[p] for p in perm)), s))
    return out


def test_symmetrize_matches_permutation_sum():
    rng = random.Random(61)
    for _ in range(8):
        alg = random_curved_ainfty(rng)
        ell = symmetrize(alg)
        assert ell.check().passed
        for n in range(0, 4):
            for key in alg.module.sorted_tuples(n):
                assert ell.maps.get(n, {}).get(key, {}) == brute_symmetrize_value(alg, key)


def test_symmetrize_commutes_with_twisting():
    rng = random.Random(71)
    for _ in range(15):
        alg = random_curved_ainfty(rng)
        a = random_element(alg.module, rng, 0)
        lhs = symmetrize(twist_ainfty(alg, a))
        rhs = twist_linfty(symmetrize(alg), a)
        for n in range(5):
            assert lhs.maps.get(n, {}) == rhs.maps.get(n, {})


def test_linfty_twist_by_zero_and_errors():
    rng = random.Random(81)
    ell = symmetrize(random_curved_ainfty(rng))
    assert twist_linfty(ell, {}).maps == ell.maps
    zero_deg = [k for k in range(ell.module.dim) if ell.module.degrees[k] != 0]
    if zero_deg:
        with pytest.raises(InvalidAlgebra):
            twist_linfty(ell, {zero_deg[0]: 1})


def test_linfty_twist_passes_and_corollary_identities():
    rng = random.Random(91)
    for _ in range(10):
        ell = symmetrize(random_curved_ainfty(rng))
        mod = ell.module
        a = random_element(mod, rng, 0)
        tw = twist_linfty(ell, a)
        assert tw.check().passed
        theta = tw.curvature
        assert theta == mc_residual_linfty(ell, a)
        # d^a(theta^a) = 0
        img = {}
        for k, c in theta.items():
            img = lc_sum(img, lc_scale(sym_value(mod, tw.maps, (k,)), c))
        assert img == {}
        # d^a d^a = -l^a_2(theta^a, -)
        for x in range(mod.dim):
            dd = {}
            for k, c in sym_value(mod, tw.maps, (x,)).items():
                dd = lc_sum(dd, lc_scale(sym_value(mod, tw.maps, (k,)), c))
            rhs = {}
            for k, c in theta.items():
                if mod.weights[k] + mod.weights[x] <= mod.truncation_weight:
                    rhs = lc_sum(rhs, lc_scale(sym_value(mod, tw.maps, (k, x)), -c))
            assert dd == rhs


def test_linfty_twist_expansion_formula():
    rng = random.Random(97)
    ell = symmetrize(random_curved_ainfty(rng))
    mod = ell.module
    a = random_element(mod, rng, 0)
    tw = twist_linfty(ell, a)
    # d^a(x) = sum_k 1/k! l_{k+1}(a^k, x), expanded over ordered tuples of supp(a)
    supp = sorted(a)
    for x in range(mod.dim):
        expect = {}
        for k in range(0, mod.arity_cap):
            for t in itertools.product(supp, repeat=k):
                c = Fraction(1, sympy.factorial(k))
                for y in t:
                    c *= a[y]
                if mod.weight(t) + mod.weights[x] <= mod.truncation_weight:
                    expect = lc_sum(expect, lc_scale(sym_value(mod, ell.maps, t + (x,)), c))
        assert sym_value(mod, tw.maps, (x,)) == expect


def test_dglie_dictionary():
    rng = random.Random(3)
    spec = three_dim_dglie(4)
    ell = from_dglie(spec)
    assert ell.check().passed
    found = 0
    for _ in range(20):
        w = random_mc(spec, rng, gauge=False)
        elem = w.element if hasattr(w, "element") else w
        coeffs = dict(elem.coeffs)
        if not coeffs:
            continue
        found += 1
        assert mc_residual_linfty(ell, coeffs) == {}
        tw = twist_linfty(ell, coeffs)
        dtw = twist_dglie(spec, w)
        for i in range(spec.dim):
            assert sym_value(ell.module, tw.maps, (i,)) == neg(dtw.d({i: Fraction(1)}))
    assert found


def test_linfty_json_round_trip_and_resorting():
    rng = random.Random(13)
    ell = symmetrize(random_curved_ainfty(rng))
    doc = json.loads(json.dumps(ell.to_json()))
    assert doc["structure"] == "linfty"
    assert CurvedLInftyAlgebra.from_json(doc) == ell
    # reversed inputs are resorted with the Koszul sign
    mod = ell.module
    for entry in doc["maps"]:
        entry["inputs"] = entry["inputs"][::-1]
        sign, _ = koszul_sort(mod, [mod.index[g] for g in entry["inputs"]])
        for o in entry["output"]:
            o["coeff"] = str(sign * Fraction(o["coeff"]))
    assert CurvedLInftyAlgebra.from_json(doc) == ell


# infinity-morphisms


def random_linfty(rng, curved=True):
    return symmetrize(random_curved_ainfty(rng, curved=curved))


def random_target(alpha, rng, arity_zero=True):
    """A random f = id + ... and the structure beta it makes into a morphism alpha -> beta."""
    mod = alpha.module
    comps = random_morphism_components(mod, rng, arity_zero=arity_zero, linear_part=False)
    f0 = comps.pop(0, {}).get((), {})
    lam = {n: t for n, t in comps.items() if n >= 2}
    lin = comps[1]
    assert all(lin[(i,)] == {i: 1} for i in range(mod.dim))
    beta = sym_gauge_isotopy(alpha, lam)
    # f: alpha -> beta, so b + f targets the twist of beta by -b
    f = InftyMorphism(mod, mod, comps)
    if f0:
        beta = twist_linfty(beta, neg(f0))
        f = f.with_arity_zero(f0)
    return f, beta


def test_identity_isotopy_is_a_morphism_and_unit():
    rng = random.Random(17)
    alpha = random_linfty(rng)
    ident = identity_isotopy(alpha.module)
    assert is_infty_morphism(ident, alpha, alpha)
    f, beta = random_target(alpha, rng)
    assert infty_compose(f, ident).components == f.components
    assert infty_compose(identity_isotopy(beta.module), f).components == f.components


def test_random_isotopies_are_morphisms():
    rng = random.Random(19)
    for _ in range(8):
        alpha = random_linfty(rng)
        f, beta = random_target(alpha, rng, arity_zero=False)
        assert beta.check().passed
        assert is_infty_morphism(f, alpha, beta)
        f0, beta0 = random_target(alpha, rng, arity_zero=True)
        assert is_infty_morphism(f0, alpha, beta0)


def test_morphism_with_arity_zero_iff_twisted_target():
    rng = random.Random(23)
    for _ in range(6):
        alpha = random_linfty(rng)
        F, beta = random_target(alpha, rng, arity_zero=True)
        b = F.arity_zero
        # b + f: alpha -> beta  iff  f: alpha -> beta^b
        assert is_infty_morphism(F, alpha, beta)
        assert is_infty_morphism(F.without_arity_zero(), alpha, twist_linfty(beta, b))


def test_strict_morphisms_compose_plainly():
    mod = GradedModuleSpec.from_basis([("p", 0, 1), ("q", 0, 2), ("r", 0, 2)], 4, 3)
    f = strict_morphism(mod, mod, {0: {0: Fraction(2)}, 1: {1: Fraction(1), 2: Fraction(1)}, 2: {2: Fraction(3)}})
    g = strict_morphism(mod, mod, {0: {0: Fraction(-1)}, 1: {2: Fraction(1)}, 2: {1: Fraction(5)}})
    gf = infty_compose(g, f)
    assert set(gf.components) == {1}
    for i in range(mod.dim):
        expect = {}
        for k, c in f.components[1][(i,)].items():
            expect = lc_sum(expect, lc_scale(g.components[1].get((k,), {}), c))
        assert gf.components[1].get((i,), {}) == expect


def test_strict_morphism_equation():
    rng = random.Random(29)
    alpha = random_linfty(rng)
    mod = alpha.module
    # conjugate by the diagonal scaling x -> 2^{weight(x)} x
    scale = [Fraction(2) ** w for w in mod.weights]
    beta_maps = {}
    for n, t in alpha.maps.items():
        for key, v in t.items():
            c = Fraction(1)
            for k in key:
                c /= scale[k]
            beta_maps.setdefault(n, {})[key] = {o: x * c * scale[o] for o, x in v.items()}
    beta = CurvedLInftyAlgebra(mod, alpha.variant, beta_maps)
    f = strict_morphism(mod, mod, {i: {i: scale[i]} for i in range(mod.dim)})
    assert is_infty_morphism(f, alpha, beta)
    assert not is_infty_morphism(f, alpha, alpha) or alpha.maps == beta.maps


def test_compose_source_target_mismatch():
    a = GradedModuleSpec.from_basis([("p", 0, 1)], 3, 3)
    b = GradedModuleSpec.from_basis([("q", 0, 1)], 3, 3)
    f = identity_isotopy(a)
    g = identity_isotopy(b)
    with pytest.raises(SourceTargetMismatch):
        infty_compose(g, f)


def test_composition_is_associative_and_preserves_morphisms():
    rng = random.Random(37)
    for _ in range(4):
        alpha = random_linfty(rng)
        f, beta = random_target(alpha, rng)
        g, gamma = random_target(beta, rng)
        h, delta = random_target(gamma, rng)
        gf = infty_compose(g, f)
        assert is_infty_morphism(gf, alpha, gamma)
        lhs = infty_compose(h, gf, max_arity=3)
        rhs = infty_compose(infty_compose(h, g, max_arity=3), f, max_arity=3)
        assert lhs.components == rhs.components


def test_morphism_validation():
    mod = GradedModuleSpec.from_basis([("p", 0, 0), ("q", 0, 1)], 3, 3)
    with pytest.raises(InvalidAlgebra):
        InftyMorphism(mod, mod, {0: {(): {0: Fraction(1)}}})
    with pytest.raises(InvalidAlgebra):
        InftyMorphism(mod, mod, {1: {(1,): {0: Fraction(1)}}})


def test_twist_identity_morphism():
    rng = random.Random(43)
    alpha = random_linfty(rng)
    a = random_element(alpha.module, rng, 0)
    out, b = twist_morphism(identity_isotopy(alpha.module), a, alpha, alpha)
    assert out.components == identity_isotopy(alpha.module).components
    assert b == a


def test_twist_morphism_curvature_relation():
    rng = random.Random(47)
    for _ in range(6):
        alpha = random_linfty(rng)
        f, beta = random_target(alpha, rng)
        a = random_element(alpha.module, rng, 0)
        out, b = twist_morphism(f, a, alpha, beta)
        assert b == f.value_at(a)
        assert is_infty_morphism(out, twist_linfty(alpha, a), twist_linfty(beta, b))


def test_twist_morphism_mc_image():
    rng = random.Random(53)
    for _ in range(6):
        base = random_linfty(rng, curved=False)
        c = random_element(base.module, rng, 0)
        alpha = twist_linfty(base, c)
        a = neg(c)
        assert mc_residual_linfty(alpha, a) == {}
        f, beta = random_target(alpha, rng)
        out, b = twist_morphism(f, a, alpha, beta)
        assert mc_residual_linfty(beta, b) == {}
        assert 0 not in out.components


def test_twist_morphism_detects_wrong_target():
    rng = random.Random(59)
    for _ in range(10):
        alpha = random_linfty(rng)
        f, beta = random_target(alpha, rng)
        a = random_element(alpha.module, rng, 0)
        wrong = sym_gauge_isotopy(alpha, random_symmetric_map(alpha.module, rng, 2, 0, 1, 0.5))
        if twist_linfty(wrong, f.value_at(a)).curvature != twist_linfty(beta, f.value_at(a)).curvature:
            with pytest.raises(FormulaMismatch):
                twist_morphism(f, a, alpha, wrong)
            return
    pytest.fail("no distinguishing instance found")


def test_split_composition_agrees_with_direct():
    rng = random.Random(67)
    for _ in range(4):
        alpha = random_linfty(rng)
        F, beta = random_target(alpha, rng)
        G, gamma = random_target(beta, rng)
        gb, direct = dolgushev_rogers_compose(G, F)
        assert gb == infty_compose(G, F).arity_zero
        assert direct.components == infty_compose(G, F).components


def test_split_composition_trivial_cases():
    rng = random.Random(71)
    alpha = random_linfty(rng)
    f, beta = random_target(alpha, rng, arity_zero=False)
    g, gamma = random_target(beta, rng, arity_zero=False)
    gb, direct = dolgushev_rogers_compose(g, f)
    assert gb == {}
    assert direct.components == infty_compose(g, f).components
    ident = identity_isotopy(alpha.module)
    gb, direct = dolgushev_rogers_compose(ident, ident)
    assert gb == {} and direct.components == ident.components


# gauge trivialization


def test_kp_on_truncated_algebra_is_zero():
    mod = GradedModuleSpec.from_basis([("u", -2, 1), ("v", -1, 1)], 4, 4)
    alg = CurvedAInftyAlgebra(mod, CLASSICAL_CURVED, {0: {(): {0: Fraction(1)}}})
    lam = kp_trivialize(alg, {0: 1})
    assert lam.is_zero()
    assert kp_residual(alg, lam) == {}


def test_kp_two_dim_linear_solve_oracle():
    alg = two_dim_curved()
    sh = alg.to_shifted()
    mod = sh.module  # su of degree -1, sv of degree 0
    theta = sh.curvature
    alpha1 = sh.maps[1]
    # unknown lam_2 of degree 0; equation alpha_1(x) + lam_2(theta, x) + (-1)^{|x|} lam_2(x, theta) = 0
    unknowns = {}
    for i, j, k in itertools.product(range(mod.dim), repeat=3):
        if mod.degrees[k] == mod.degrees[i] + mod.degrees[j]:
            unknowns[(i, j, k)] = sympy.Symbol(f"c_{i}{j}{k}")
    eqs = []
    for x in range(mod.dim):
        for k in range(mod.dim):
            e = alpha1.get((x,), {}).get(k, 0)
            for t, c in theta.items():
                e += c * unknowns.get((t, x, k), 0)
                e += (-1) ** (mod.degrees[x] % 2) * c * unknowns.get((x, t, k), 0)
            eqs.append(sympy.nsimplify(e))
    sol = sympy.solve(eqs, list(unknowns.values()), dict=True)
    assert sol, "the arity-one equation has a solution"
    lam = kp_trivialize(alg, dual_of_curvature(alg))
    values = {s: 0 for s in unknowns.values()}
    for key, v in lam.components.get(2, {}).items():
        for k, c in v.items():
            values[unknowns[key + (k,)]] = c
    assert all(sympy.simplify(e.subs(values)) == 0 for e in eqs)
    # lam_2(su, sv) = -su is the value produced by the contracting homotopy
    assert lam.components[2] == {(0, 1): {0: -1}}
    assert kp_residual(alg, lam) == {}


def test_kp_random_instances():
    rng = random.Random(73)
    done = 0
    for _ in range(12):
        alg = random_curved_ainfty(rng)
        if not alg.curvature:
            continue
        lam = kp_trivialize(alg, dual_of_curvature(alg))
        assert set(lam.components) <= set(range(2, alg.module.arity_cap + 2))
        assert kp_residual(alg, lam) == {}
        done += 1
    assert done >= 8


def test_kp_rejects_bad_functional():
    alg = two_dim_curved()
    with pytest.raises(CurvatureNotUnital):
        kp_trivialize(alg, {0: 2})
    with pytest.raises(CurvatureNotUnital):
        kp_trivialize(alg, {1: 1})
    with pytest.raises(CurvatureNotUnital):
        kp_trivialize(dg_xy(), {0: 1})


def test_contracting_homotopy_identity():
    rng = random.Random(79)
    for _ in range(8):
        alg = random_curved_ainfty(rng)
        if not alg.curvature:
            continue
        sh = alg.to_shifted()
        phi = dual_of_curvature(alg)
        g = {}
        for n in (0, 1, 2):
            g = add_maps(g, random_map(sh.module, rng, n, rng.choice((-1, 0)), 0, 0.3))
        assert homotopy_identity_residual(alg, phi, g) == {}


# convolution encoding


def test_encoding_round_trip():
    rng = random.Random(83)
    for _ in range(8):
        alg = random_curved_ainfty(rng)
        e = encode(alg)
        assert e.degree == -1
        assert e.is_maurer_cartan()
        assert decode(e) == alg.to_classical()
        assert decode(e).to_shifted() == alg
    assert decode(encode(dg_xy()), curved=True).variant == CLASSICAL_CURVED


def test_encoding_detects_broken_structure():
    rng = random.Random(89)
    bad = perturbed(random_curved_ainfty(rng), rng)
    assert encode(bad).is_maurer_cartan() == bad.check().passed


def test_convolution_component_degrees():
    mod = GradedModuleSpec.from_basis([("u", -2, 1), ("v", -1, 1)], 3, 3)
    with pytest.raises(InvalidAlgebra):
        ConvolutionElement(mod, 0, {1: {(1,): {0: Fraction(1)}}})
    e = ConvolutionElement(mod, -1, {1: {(1,): {0: Fraction(1)}}})
    assert e.to_algebra().variant == CLASSICAL
    with pytest.raises(InvalidAlgebra):
        ConvolutionElement(mod, 1, {0: {(): {1: Fraction(1)}}}).to_algebra()


def test_gauge_weight_rule():
    mod = GradedModuleSpec.from_basis([("p", 0, 1), ("q", 1, 2), ("s", 1, 1)], 3, 3)
    ok = ConvolutionElement(mod, 1, {0: {(): {0: Fraction(1)}}, 1: {(0,): {1: Fraction(1)}}})
    assert ok.gauge_admissible()
    bad = ConvolutionElement(mod, 1, {1: {(0,): {2: Fraction(1)}}})
    assert not bad.gauge_admissible()


def random_convolution(mod, rng, degree):
    comps = {}
    for n in range(0, 4):
        comps = add_maps(comps, random_map(mod, rng, n, degree + n - 1, 0, 0.3))
    return ConvolutionElement(mod, degree, comps)


def test_star_matches_partial_composition_sum():
    rng = random.Random(97)
    for _ in range(10):
        base = random_curved_ainfty(rng).to_classical().module
        f = random_convolution(base, rng, rng.choice((-1, 0, 1)))
        g = random_convolution(base, rng, rng.choice((-1, 0, 1, 2)))
        lhs = ConvolutionElement(base, f.degree + g.degree, f.star(g).components).shifted_components()
        rhs = ns_star(base.shifted(1), f.shifted_components(), g.shifted_components(), g.degree, max_arity=2 * base.arity_cap - 1)
        assert lhs == rhs


def test_star_is_pre_lie():
    rng = random.Random(101)
    base = random_curved_ainfty(rng).to_classical().module
    for _ in range(3):
        f, g, h = (random_convolution(base, rng, rng.choice((-1, 0))) for _ in range(3))

        def assoc(x, y, z):
            return add_maps(x.star(y).star(z).components, x.star(y.star(z)).components, -1)

        sign = -1 if (g.degree * h.degree) % 2 else 1
        assert assoc(f, g, h) == add_maps({}, assoc(f, h, g), sign)


# properties


@settings(max_examples=20, deadline=None)
@given(SEEDS)
def test_property_twist_passes_check(seed):
    rng = random.Random(seed)
    alg = random_curved_ainfty(rng)
    a = random_element(alg.module, rng, 0)
    assert twist_ainfty(alg, a).check().passed
    assert twist_linfty(symmetrize(alg), a).check().passed


@settings(max_examples=20, deadline=None)
@given(SEEDS)
def test_property_twist_additivity(seed):
    rng = random.Random(seed)
    alg = random_curved_ainfty(rng)
    a, b = random_element(alg.module, rng, 0), random_element(alg.module, rng, 0)
    assert twist_additivity_check(alg, a, b)
    ell = symmetrize(alg)
    both = lc_sum(a, b)
    assert twist_linfty(twist_linfty(ell, a), b).maps == twist_linfty(ell, both).maps


@settings(max_examples=20, deadline=None)
@given(SEEDS)
def test_property_residual_zero_iff_curvature_zero(seed):
    rng = random.Random(seed)
    base = random_curved_ainfty(rng, curved=rng.random() < 0.5)
    b = random_element(base.module, rng, 0)
    alg = twist_ainfty(base, b)
    a = neg(b) if rng.random() < 0.5 else random_element(alg.module, rng, 0)
    assert (mc_residual_ainfty(alg, a) == {}) == (twist_ainfty(alg, a).curvature == {})


@settings(max_examples=15, deadline=None)
@given(SEEDS)
def test_property_encoding_round_trip(seed):
    rng = random.Random(seed)
    alg = random_curved_ainfty(rng)
    assert decode(encode(alg)).to_shifted().maps == alg.maps
    sh = alg
    again = ConvolutionElement.from_shifted(sh.module, -1, sh.maps)
    assert again == encode(alg)


@settings(max_examples=15, deadline=None)
@given(SEEDS)
def test_property_homotopy_identity(seed):
    rng = random.Random(seed)
    alg = random_curved_ainfty(rng)
    assume(alg.curvature)
    sh = alg.to_shifted()
    g = add_maps(random_map(sh.module, rng, 1, 0, 0, 0.4), random_map(sh.module, rng, 2, -1, 0, 0.3))
    phi = dual_of_curvature(alg)
    assert homotopy_identity_residual(alg, phi, g) == {}
    # h lands in maps with theta* in the first slot and D raises nothing on weight
    assert contracting_homotopy(sh.module, insert_curvature(sh.module, {}, sh.curvature), phi) == {}


@settings(max_examples=10, deadline=None)
@given(SEEDS)
def test_property_kp_residual_vanishes(seed):
    rng = random.Random(seed)
    alg = random_curved_ainfty(rng)
    assume(alg.curvature)
    lam = kp_trivialize(alg, dual_of_curvature(alg))
    assert kp_residual(alg, lam) == {}


@settings(max_examples=10, deadline=None)
@given(SEEDS)
def test_property_morphism_twisting(seed):
    rng = random.Random(seed)
    alpha = random_linfty(rng)
    f, beta = random_target(alpha, rng)
    a = random_element(alpha.module, rng, 0)
    out, b = twist_morphism(f, a, alpha, beta)
    assert is_infty_morphism(out, twist_linfty(alpha, a), twist_linfty(beta, b))
    assert morphism_residual(f, alpha, beta) == {}
