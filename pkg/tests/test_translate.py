from fractions import Fraction as F

import pytest

from relulogic import (FragmentError, LogicId, LukProtoNeuron, check_ik_equivalence,
                       check_plain_equivalence, compute_K_term, eval_formula, format_term,
                       formula_to_luk_proto, formula_to_term, luk_proto_to_formula,
                       network_to_logic, parse_formula, parse_term, prop, proto_neuron_to_logic,
                       scale, term_to_formula, translate_terms)
from relulogic.equiv import make_grid
from relulogic.logic import classify, impl, neg
from relulogic.translate import luk_proto_term


def test_K_examples():
    assert compute_K_term(parse_term("x0 + x1"), 1) == 16
    assert compute_K_term(parse_term("5"), 1) == 25
    assert compute_K_term(parse_term("x0"), 1) == 8
    assert compute_K_term(parse_term("x0"), 3) == 9


def test_term_to_formula_examples():
    tr = term_to_formula(parse_term("0"), 1)
    assert eval_formula(tr.formula, {}) == F(1, 2)
    assert term_to_formula(parse_term("x0"), 1, 8).formula is prop(0)
    tr = term_to_formula(parse_term("x0 + x1"), 1, 16)
    assert tr.K_min == 16
    assert check_ik_equivalence(tr.formula, parse_term("x0 + x1"), 1, 16).passed
    with pytest.raises(ValueError):
        term_to_formula(parse_term("x0 + x1"), 1, 15)
    with pytest.raises(ValueError):
        term_to_formula(parse_term("x0"), 1, target=LogicId.RPL)


@pytest.mark.parametrize("text", ["ReLU(x0 - 1/2)", "x0*x1 - ReLU(-x1)", "3/4*x0*x0"])
@pytest.mark.parametrize("target", [LogicId.RPLProd, LogicId.LPiHalf_ImpPMinus])
def test_term_to_formula_targets(text, target):
    t = parse_term(text)
    tr = term_to_formula(t, 1, target=target)
    assert target in classify(tr.formula).logic_memberships
    assert check_ik_equivalence(tr.formula, t, 1, tr.k_value).passed


def test_wrong_k_is_detected():
    t = parse_term("x0 + 1")
    tr = term_to_formula(t, 1)
    rep = check_ik_equivalence(tr.formula, t, 1, tr.k_value + 1)
    assert not rep.passed and rep.first_mismatch is not None


def test_translate_terms_shares_k():
    trs = translate_terms([parse_term("x0"), parse_term("x0 + x1")], 1)
    assert {tr.k_value for tr in trs} == {16}


def test_formula_to_term_examples():
    assert formula_to_term(parse_formula("2/3")) == parse_term("2/3")
    assert format_term(formula_to_term(parse_formula("p0 ->L p1"))) == "1 + -1*ReLU(x0 + -1*x1)"
    assert formula_to_term(parse_formula("p0 (.) p1")) == parse_term("x0*x1")
    assert formula_to_term(parse_formula("(half ->P 1/3) ->L p0")) == \
        formula_to_term(parse_formula("2/3 ->L p0"))
    with pytest.raises(FragmentError):
        formula_to_term(parse_formula("p0 ->P p1"))
    phi = parse_formula("SSUM[3](p0) ->L SCSUM[2](p1)")
    assert check_plain_equivalence(phi, formula_to_term(phi)).passed


def test_proto_neuron_examples():
    assert proto_neuron_to_logic(parse_term("x0"), 1).formula is prop(0)
    tr = proto_neuron_to_logic(parse_term("-1*x0"), 1)
    assert tr.formula is neg(prop(0))
    assert eval_formula(tr.formula, {0: scale(tr.k_value, F(1, 2))}) == scale(tr.k_value, F(-1, 2))
    with pytest.raises(FragmentError):
        proto_neuron_to_logic(parse_term("x0*x1"), 1)
    with pytest.raises(FragmentError):
        proto_neuron_to_logic(parse_term("1/2*x0"), 1, strategy="direct")


@pytest.mark.parametrize("strategy", ["inflate", "direct"])
def test_proto_neuron_integer_weights(strategy):
    t = parse_term("ReLU(3*x0 + -2*x1 + 1) + -1*x1")
    tr = proto_neuron_to_logic(t, 1, strategy=strategy)
    assert tr.multiplier_D == 1
    assert check_ik_equivalence(tr.formula, t, 1, tr.k_value).passed


def test_inflate_with_fractional_weights_is_not_ik_equivalent():
    # built at scale k·D but read at scale k: the claimed equivalence fails
    t = parse_term("1/4*x0")
    tr = proto_neuron_to_logic(t, 1)
    assert tr.multiplier_D == 4 and tr.inner_scale == 4 * tr.k_value
    assert not check_ik_equivalence(tr.formula, t, 1, tr.k_value).passed
    assert check_ik_equivalence(tr.formula, parse_term("x0"), 1, tr.inner_scale).passed


def test_two_layer_network():
    from relulogic import Layer, NeuralNetwork, network_to_terms
    N = NeuralNetwork((0, 1), (Layer([[4, 8], [9, 7]], [-5, 3]), Layer([[-8, 2]], [5])))
    [tr] = network_to_logic(N, 1)
    assert tr.K_min == 9 ** 26 and tr.multiplier_D == 1
    o = network_to_terms(N)[0]
    assert check_ik_equivalence(tr.formula, o, 1, tr.k_value,
                                make_grid({0, 1}, [-1, 0, 1])).passed


def test_luk_roundtrip_examples():
    k = F(3)
    assert luk_proto_to_formula(LukProtoNeuron(parse_term("x0"), k)) is prop(0)
    t = luk_proto_term(k, parse_term("x0"), parse_term("x1"))
    assert luk_proto_to_formula(LukProtoNeuron(t, k)) is impl(prop(0), prop(1))
    nested = luk_proto_term(k, t, parse_term("x2"))
    phi = luk_proto_to_formula(LukProtoNeuron(nested, k), 1)
    assert phi is parse_formula("(p0 ->L p1) ->L p2")
    grid = make_grid({0, 1, 2}, [-1, 0, 1])
    assert check_ik_equivalence(phi, nested, 1, 3, grid).passed
    lp = formula_to_luk_proto(parse_formula("p0 ->L p1"))
    assert lp.term == luk_proto_term(1, parse_term("x0"), parse_term("x1"))
    with pytest.raises(FragmentError):
        LukProtoNeuron(parse_term("x0 + x1"), k)
    with pytest.raises(FragmentError):
        formula_to_luk_proto(parse_formula("~L p0"))
    with pytest.raises(ValueError):
        luk_proto_to_formula(LukProtoNeuron(t, k), 4)
