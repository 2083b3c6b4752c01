import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mctwist.errors import (
    FormulaMismatch,
    InvalidAlgebra,
    InvalidDeformation,
    NoUnit,
    NotACycle,
    NotGroupLike,
    NotMaurerCartan,
    WeightZeroGaugeInput,
)
from mctwist.mc import (
    DG_LIE,
    PRE_LIE,
    FilteredAlgebraSpec,
    FreeLieElement,
    MaurerCartanElement,
    Obstruction,
    bch,
    bch_eval,
    bch_lie,
    circle_product,
    extend_formal_deformation,
    gauge_act_prelie,
    gauge_routes,
    gauge_series_action,
    gauge_trivialize_formal,
    homology_class_nonzero,
    mc_residual,
    prelie_exp,
    prelie_log,
    symmetric_brace,
    twist_dglie,
)
from mctwist.mc.freelie import is_lyndon, lyndon_words, poly_to_lyndon, NotLie
from mctwist.mc.instances import (
    convolution_prelie,
    obstructed_dglie,
    random_element,
    random_graded_module,
    random_mc,
    random_prelie_instance,
    rigid_dglie,
    rooted_tree_prelie,
    three_dim_dglie,
    unobstructed_dglie,
    upper_triangular,
)


F = Fraction


def lie(text_terms, order):
    """Build a FreeLieElement from {lyndon word: coeff}."""
    return FreeLieElement(text_terms, order)


# free Lie algebra and BCH


def test_lyndon_generation():
    words = lyndon_words("xy", 4)
    assert words == sorted(words)
    assert all(is_lyndon(w) for w in words)
    assert len([w for w in words if len(w) == 4]) == 3


def test_non_lie_polynomial_rejected():
    with pytest.raises(NotLie):
        poly_to_lyndon({"xx": F(1)})


def test_bch_order_one():
    assert bch(1) == lie({"x": 1, "y": 1}, 1)


def test_bch_order_two():
    assert bch(2) == lie({"x": 1, "y": 1, "xy": F(1, 2)}, 2)


def test_bch_order_three_from_the_definition():
    # Lyndon words: xxy = [x,[x,y]], xyy = [[x,y],y] = -[y,[x,y]]
    expected = lie({"x": 1, "y": 1, "xy": F(1, 2), "xxy": F(1, 12), "xyy": F(1, 12)}, 3)
    assert bch(3) == expected
    assert str(bch(3)) == "x + y + 1/2[x,y] + 1/12[x,[x,y]] - 1/12[y,[x,y]]"


def test_bch_order_three_commutator_form():
    # 1/12([[x,y],y] + [[y,x],x]) in the second arrangement
    x, y = FreeLieElement.letter("x", 3), FreeLieElement.letter("y", 3)
    xy = x.bracket(y)
    alt = x + y + xy.scale(F(1, 2)) + (xy.bracket(y) + y.bracket(x).bracket(x)).scale(F(1, 12))
    assert bch(3) == alt


def test_flipped_sign_cubic_term_is_not_associative():
    """The variant with +1/12 [y,[x,y]] does not define an associative law."""
    flipped = lie({"x": 1, "y": 1, "xy": F(1, 2), "xxy": F(1, 12), "xyy": F(-1, 12)}, 3)

    def law(a, b):
        return flipped.evaluate({"x": a, "y": b}, lambda u, v: u.bracket(v), lambda u, v: u + v, lambda c, u: u.scale(c), FreeLieElement({}, 3))

    x, y, z = (FreeLieElement.letter(c, 3) for c in "xyz")
    assert law(law(x, y), z) != law(x, law(y, z))


@pytest.mark.parametrize("n", range(1, 9))
def test_bch_is_lie_by_dynkin(n):
    assert bch(n).dynkin_consistent()


@pytest.mark.parametrize("n", range(1, 7))
def test_bch_associative(n):
    x, y, z = (FreeLieElement.letter(c, n) for c in "xyz")
    assert bch_lie(bch_lie(x, y), z) == bch_lie(x, bch_lie(y, z))


def test_bch_units():
    x = FreeLieElement.letter("x", 5)
    zero = FreeLieElement({}, 5)
    assert bch_lie(x, zero) == x == bch_lie(zero, x)


# algebras


def abelian_dg() -> FilteredAlgebraSpec:
    basis = [("l", 0, 1), ("m", -1, 1), ("n", -1, 2)]
    return FilteredAlgebraSpec(basis, DG_LIE, {}, {"l": {"m": 1}}, None, 4)


def test_invalid_jacobi_rejected():
    basis = [("a", 0, 1), ("b", 0, 1), ("c", 0, 2)]
    prod = {("a", "b"): {"c": 1}, ("b", "a"): {"c": 1}}
    with pytest.raises(InvalidAlgebra):
        FilteredAlgebraSpec(basis, DG_LIE, prod, {}, None, 4)


def test_weight_lowering_product_rejected():
    basis = [("a", 0, 1), ("b", 0, 1)]
    with pytest.raises(InvalidAlgebra):
        FilteredAlgebraSpec(basis, PRE_LIE, {("a", "a"): {"b": 1}}, {}, None, 3)


def test_instances_validate():
    for alg in [rooted_tree_prelie(("a",), 5), upper_triangular(4, 3), three_dim_dglie(), rigid_dglie()]:
        assert alg.violations() == []
    V, dV = [("p", -1, 1), ("q", 0, 0)], {"q": {"p": 1}}
    assert convolution_prelie(V, 3, 5, dV).violations() == []


def test_json_round_trip():
    V, dV = [("p", -1, 1), ("q", 0, 0)], {"q": {"p": 1}}
    alg = convolution_prelie(V, 2, 4, dV)
    doc = json.loads(json.dumps(alg.to_json()))
    back = FilteredAlgebraSpec.from_json(doc)
    assert back.to_json() == alg.to_json()


def test_malformed_json_rejected():
    with pytest.raises(InvalidAlgebra):
        FilteredAlgebraSpec.from_json({"basis": [{"name": "a"}], "kind": DG_LIE})


# bch_eval


def test_bch_eval_with_zero():
    alg = upper_triangular(4, 3)
    x = alg.element({"E01": 1, "E13": F(1, 2)})
    assert bch_eval(x, alg.zero()) == x
    assert bch_eval(alg.zero(), x) == x


def test_bch_eval_abelian():
    alg = abelian_dg()
    x, y = alg.gen("l"), alg.gen("l") * 3
    assert bch_eval(x, y) == x + y


def test_bch_eval_weight_zero_rejected():
    alg = upper_triangular(3, 2)
    with pytest.raises(WeightZeroGaugeInput):
        bch_eval(alg.gen("I"), alg.zero())


def test_bch_eval_matches_matrix_logarithm():
    # in an associative algebra exp(BCH(x,y)) = exp(x) exp(y)
    alg = upper_triangular(5, 4)
    rng = random.Random(2)
    for _ in range(5):
        x, y = random_element(alg, rng), random_element(alg, rng)
        assert prelie_exp(bch_eval(x, y)) == prelie_exp(x).star(prelie_exp(y))


# braces


def test_brace_with_no_arguments():
    alg = upper_triangular(3, 2)
    a = alg.gen("E01")
    assert symmetric_brace(a, []) == a


def test_brace_with_one_argument_is_product():
    alg = rooted_tree_prelie(("a", "b"), 4)
    a, b = alg.gen("a"), alg.gen("b[a]")
    assert symmetric_brace(a, [b]) == a.star(b)


def _brace_oracle(a, bs, degs):
    """Plain recursion without memo, sorting or weight shortcuts."""
    if not bs:
        return a
    n = len(bs)
    out = _brace_oracle(a, bs[:-1], degs[:-1]).star(bs[-1])
    for i in range(n - 1):
        s = -1 if (degs[-1] * sum(degs[i + 1 : n - 1])) % 2 else 1
        nb = bs[:i] + [bs[i].star(bs[-1])] + bs[i + 1 : n - 1]
        nd = degs[:i] + [degs[i] + degs[-1]] + degs[i + 1 : n - 1]
        out = out - _brace_oracle(a, nb, nd) * s
    return out


def test_two_argument_brace_on_four_dim_algebra():
    alg = upper_triangular(3, 2)
    assert alg.dim == 4
    rng = random.Random(11)
    for _ in range(10):
        a = random_element(alg, rng, 0, 0)
        b, c = random_element(alg, rng), random_element(alg, rng)
        expected = a.star(b).star(c) - a.star(b.star(c))
        assert symmetric_brace(a, [b, c]) == expected


def test_brace_matches_oracle_and_is_graded_symmetric():
    rng = random.Random(4)
    V, dV = [("p", -1, 1), ("q", 0, 0)], {"q": {"p": 1}}
    alg = convolution_prelie(V, 3, 5, dV)
    for _ in range(8):
        a = random_element(alg, rng, None, 0)
        b = random_element(alg, rng, -1, 1)
        c = random_element(alg, rng, 0, 1)
        e = random_element(alg, rng, -1, 1)
        got = symmetric_brace(a, [b, c, e])
        assert got == _brace_oracle(a, [b, c, e], [-1, 0, -1])
        # swapping two odd arguments costs a sign
        assert symmetric_brace(a, [e, c, b]) == -got
        assert symmetric_brace(a, [c, b, e]) == got


# exponential, logarithm, circle product


def test_exp_of_zero_is_one():
    alg = upper_triangular(3, 2)
    assert prelie_exp(alg.zero()) == alg.one()


def test_exp_of_square_zero_element():
    alg = upper_triangular(4, 3)
    lam = alg.gen("E01") + alg.gen("E23")
    assert lam.star(lam).is_zero()
    assert prelie_exp(lam) == alg.one() + lam


def test_exp_needs_unit():
    alg = three_dim_dglie()
    with pytest.raises(NoUnit):
        prelie_exp(alg.zero())


def test_log_of_one_is_zero():
    alg = rooted_tree_prelie(("a",), 4)
    assert prelie_log(alg.one()).is_zero()


def test_log_rejects_non_group_like():
    alg = rooted_tree_prelie(("a",), 4)
    with pytest.raises(NotGroupLike):
        prelie_log(alg.one() * 2)
    with pytest.raises(NotGroupLike):
        circle_product(alg.gen("a"), alg.gen("a"))


@pytest.mark.parametrize("order", [2, 3])
def test_magnus_truncations(order):
    # on the free pre-Lie algebra with one generator, weight = a-degree
    alg = rooted_tree_prelie(("a",), order)
    a = alg.gen("a")
    aa = a.star(a)
    expected = a - aa * F(1, 2)
    if order >= 3:
        expected = expected + a.star(aa) * F(1, 4) + aa.star(a) * F(1, 12)
    assert prelie_log(alg.one() + a) == expected


def test_circle_with_unit_is_identity():
    alg = rooted_tree_prelie(("a", "b"), 4)
    x = alg.gen("a[b]") + alg.gen("b") * 3
    assert circle_product(x, alg.one()) == x


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_exp_log_round_trip(seed):
    rng = random.Random(seed)
    alg = random_prelie_instance(rng, 6)
    lam = random_element(alg, rng, 0, 1)
    assert prelie_log(prelie_exp(lam)) == lam
    g = alg.one() + random_element(alg, rng, 0, 1)
    assert prelie_exp(prelie_log(g)) == g


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_exponential_is_a_group_isomorphism(seed):
    rng = random.Random(seed)
    alg = random_prelie_instance(rng, 6)
    lam, mu = random_element(alg, rng, 0, 1), random_element(alg, rng, 0, 1)
    assert prelie_exp(bch_eval(lam, mu)) == circle_product(prelie_exp(lam), prelie_exp(mu))


# Maurer-Cartan elements and gauge action


def test_residual_of_zero():
    alg = three_dim_dglie()
    assert mc_residual(alg.zero()).is_zero()


def test_residual_vanishes_by_truncation():
    alg = three_dim_dglie().truncated(1)
    x = alg.gen("e1") * 5
    assert mc_residual(x).is_zero()


def test_residual_matches_structure_constants():
    alg = three_dim_dglie()
    rng = random.Random(8)
    for _ in range(10):
        p, q = F(rng.randint(-5, 5), rng.randint(1, 4)), F(rng.randint(-5, 5), rng.randint(1, 4))
        x = alg.element({"e1": p, "e2": q})
        # d e1 = e3, [e1,e1] = [e1,e2] = [e2,e1] = e3, [e2,e2] = 0
        expected = p + F(1, 2) * (p * p + 2 * p * q)
        assert mc_residual(x) == alg.element({"e3": expected})


def test_non_mc_element_rejected():
    alg = three_dim_dglie()
    with pytest.raises(NotMaurerCartan):
        MaurerCartanElement(alg.gen("e1"))


def test_gauge_by_zero_is_trivial():
    rng = random.Random(1)
    V, dV = random_graded_module(rng)
    alg = convolution_prelie(V, 3, 5, dV)
    alpha = random_mc(alg, rng)
    assert gauge_act_prelie(alg.zero(), alpha).element == alpha.element


def test_gauge_in_abelian_algebra():
    alg = abelian_dg()
    lam = alg.gen("l") * 2
    alpha = MaurerCartanElement(alg.gen("n"))
    # (id - exp ad)/ad (d lam) = -d lam when every bracket vanishes
    assert gauge_act_prelie(lam, alpha).element == alg.gen("n") - lam.d()


def test_gauge_rejects_weight_zero_parameter():
    alg = upper_triangular(3, 2)
    with pytest.raises(WeightZeroGaugeInput):
        gauge_act_prelie(alg.one(), alg.zero())


def test_gauge_mismatch_detected():
    # dropping the right multiplication by delta breaks the circle route
    V, dV = [("p", -1, 1), ("q", 0, 0)], {"q": {"p": 1}}
    doc = convolution_prelie(V, 3, 5, dV).to_json()
    doc["right_delta"] = []
    bad = FilteredAlgebraSpec.from_json(doc, validate=False)
    lam = random_element(bad, random.Random(3), 0, 1)
    with pytest.raises(FormulaMismatch):
        gauge_act_prelie(lam, bad.zero())


@settings(max_examples=12, deadline=None)
@given(st.integers(0, 10**6))
def test_gauge_routes_agree_and_preserve_mc(seed):
    rng = random.Random(seed)
    V, dV = random_graded_module(rng)
    alg = convolution_prelie(V, 3, 6, dV)
    lam = random_element(alg, rng, 0, 1)
    anything = random_element(alg, rng, -1, 1)
    routes = gauge_routes(lam, anything)
    assert len(routes) == 3
    assert len({frozenset(v.coeffs.items()) for v in routes.values()}) == 1
    alpha = random_mc(alg, rng)
    out = gauge_act_prelie(lam, alpha)
    assert mc_residual(out.element).is_zero()


@settings(max_examples=12, deadline=None)
@given(st.integers(0, 10**6))
def test_gauge_action_law(seed):
    rng = random.Random(seed)
    V, dV = random_graded_module(rng)
    alg = convolution_prelie(V, 3, 6, dV)
    lam, mu = random_element(alg, rng, 0, 1), random_element(alg, rng, 0, 1)
    alpha = random_mc(alg, rng)
    lhs = gauge_act_prelie(lam, gauge_act_prelie(mu, alpha))
    rhs = gauge_act_prelie(bch_eval(lam, mu), alpha)
    assert lhs.element == rhs.element


def test_dglie_routes_with_and_without_delta():
    rng = random.Random(9)
    V, dV = [("p", -1, 1), ("q", 0, 0)], {"q": {"p": 1}}
    lie_alg = convolution_prelie(V, 3, 5, dV).skew_symmetrization()
    for _ in range(5):
        lam = random_element(lie_alg, rng, 0, 1)
        routes = gauge_routes(lam, random_element(lie_alg, rng, -1, 1))
        assert set(routes) == {"flow", "flow_delta"}
        assert routes["flow"] == routes["flow_delta"]


# twisting dg Lie algebras


def test_twist_by_zero_is_identity():
    alg = three_dim_dglie()
    assert twist_dglie(alg, alg.zero()).to_json() == alg.to_json()


def test_twist_then_untwist():
    alg = three_dim_dglie()
    w = alg.element({"e2": 3})
    assert mc_residual(w).is_zero()
    tw = twist_dglie(alg, w)
    back = twist_dglie(tw, (-w).lift(tw)) if mc_residual((-w).lift(tw)).is_zero() else None
    # -w is MC in the w-twisted algebra exactly when 0 is MC in alg
    assert back is not None and back.to_json() == alg.to_json()


def test_twist_additivity():
    rng = random.Random(5)
    V, dV = [("p", -1, 1), ("q", 0, 0)], {"q": {"p": 1}}
    g = convolution_prelie(V, 3, 5, dV).skew_symmetrization()
    pre = convolution_prelie(V, 3, 5, dV)
    checked = 0
    for _ in range(10):
        a = random_mc(pre, rng).element.lift(g)
        b_pre = random_mc(pre, rng).element
        ga = twist_dglie(g, a)
        # beta is MC in g^a iff a + beta is MC in g
        beta = (b_pre.lift(g) - a).lift(ga)
        lhs_mc = mc_residual(beta).is_zero()
        rhs_mc = mc_residual(a + beta.lift(g)).is_zero()
        assert lhs_mc == rhs_mc
        if lhs_mc:
            assert twist_dglie(ga, beta).to_json() == twist_dglie(g, a + beta.lift(g)).to_json()
            checked += 1
    assert checked > 0


def test_twist_rejects_non_mc():
    alg = three_dim_dglie()
    with pytest.raises(NotMaurerCartan):
        twist_dglie(alg, alg.gen("e1"))


# formal deformations


def test_extension_in_abelian_algebra():
    alg = abelian_dg()
    coeffs = extend_formal_deformation(alg, alg.zero(), alg.gen("m"), 4)
    assert [c.is_zero() for c in coeffs] == [False, True, True, True]


def test_extension_unobstructed():
    alg = unobstructed_dglie()
    coeffs = extend_formal_deformation(alg, alg.zero(), alg.gen("x"), 6)
    assert isinstance(coeffs, list) and len(coeffs) == 6


def test_extension_obstructed():
    alg = obstructed_dglie()
    out = extend_formal_deformation(alg, alg.zero(), alg.gen("x"), 3)
    assert isinstance(out, Obstruction) and out.order == 2
    assert homology_class_nonzero(alg.zero(), out.cycle, -2)


def test_extension_needs_cycle():
    alg = unobstructed_dglie()
    with pytest.raises(NotACycle):
        extend_formal_deformation(alg, alg.zero(), alg.gen("u"), 3)


def test_trivial_deformation_trivialized_by_zero():
    alg = rigid_dglie()
    phi = alg.element({"b": 1})
    lams = gauge_trivialize_formal(alg, phi, [alg.zero()] * 3, 3)
    assert all(l.is_zero() for l in lams)


def test_gauge_round_trip_through_formal_action():
    alg = rigid_dglie()
    phi = alg.element({"b": 2, "b1": -1})
    lam = alg.element({"a0": 1, "a1": 3})
    Phi = gauge_series_action(alg, phi, [lam], 4)
    lams = gauge_trivialize_formal(alg, phi, Phi, 4)
    assert gauge_series_action(alg, phi, lams, 4) == Phi


def test_rigid_algebra_always_trivializes():
    alg = rigid_dglie()
    phi = alg.element({"b": 1})
    x = alg.element({"b": 1, "b1": 5})
    coeffs = extend_formal_deformation(alg, phi, x, 3)
    lams = gauge_trivialize_formal(alg, phi, coeffs, 3)
    assert gauge_series_action(alg, phi, lams, 3) == coeffs


def test_invalid_deformation_rejected():
    alg = obstructed_dglie()
    with pytest.raises(InvalidDeformation):
        gauge_trivialize_formal(alg, alg.zero(), [alg.gen("x"), alg.zero()], 2)
