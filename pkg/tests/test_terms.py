from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from relulogic import (Add, Const, Mul, ParseError, Relu, Var, atomic_length, degree, eval_term,
                       format_term, is_proto_neuron, parse_term, subterms, terms_equal_on_grid)
from relulogic.equiv import make_grid
from relulogic.terms import parse_rational


def test_parse_example():
    assert parse_term("ReLU(x0 + x0*x1) + x1") == Add(
        Relu(Add(Var(0), Mul(Var(0), Var(1)))), Var(1))
    assert parse_term("3/4") == Const(F(3, 4))
    assert parse_term("-x0") == Mul(Const(F(-1)), Var(0))
    assert parse_term("-3") == Const(F(-3))


@pytest.mark.parametrize("bad", ["", "x0 +", "ReLU x0", "1.5", "1/0", "(x0", "x0 x1", "y"])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_term(bad)


def test_parse_rational():
    assert parse_rational("6/4") == F(3, 2)
    assert parse_rational(-3) == -3
    for bad in ("0.5", "1/0", "a", 1.5):
        with pytest.raises(ParseError):
            parse_rational(bad)


def test_eval_examples():
    assert eval_term(parse_term("ReLU(x0 + x0*x1) + x1"), {0: 3, 1: F(1, 2)}) == 5
    assert eval_term(parse_term("ReLU(x0)"), {0: -2}) == 0
    assert eval_term(parse_term("(x0 + 3)*x1"), {0: F(1, 2), 1: F(2, 3)}) == F(7, 3)
    with pytest.raises(KeyError):
        eval_term(Var(4), {})


def test_degree_length_subterms():
    assert degree(parse_term("x0*(x1 + x2)")) == 2
    assert degree(parse_term("3*(x0 + x1)")) == 1
    assert degree(parse_term("ReLU(x0*x1*x2)")) == 3
    assert atomic_length(Var(0)) == 1
    assert atomic_length(parse_term("ReLU(x0 + x0*x1) + x1")) == 4
    assert atomic_length(parse_term("3*(x0 + x1)")) == 3
    assert subterms(Var(0)) == {Var(0)}
    assert subterms(Relu(Var(0))) == {Var(0), Relu(Var(0))}
    assert subterms(Add(Var(0), Var(0))) == {Var(0), Add(Var(0), Var(0))}


def test_proto_neuron():
    assert is_proto_neuron(parse_term("3*(x0 + x1)"))
    assert not is_proto_neuron(parse_term("(x0 + 3)*x1"))
    assert is_proto_neuron(Const(F(5)))


def test_grid_equality():
    g = make_grid({0, 1}, [F(-1), F(0), F(1, 2), F(2)])
    assert terms_equal_on_grid(parse_term("x0 + x1"), parse_term("1/2*x0 + 1/2*x0 + 2*x1 - x1"), g)
    assert not terms_equal_on_grid(Var(0), Relu(Var(0)), make_grid({0}, [F(-1)]))


def test_shared_dag_is_linear():
    # 200 nested self-additions: tree size 2^200, graph size 200
    t = Var(0)
    for _ in range(200):
        t = Add(t, t)
    assert eval_term(t, {0: 1}) == 2 ** 200
    assert atomic_length(t) == 2 ** 200
    assert len(subterms(t)) == 201


# ---------------------------------------------------------------- properties

_leaf = st.one_of(
    st.builds(Var, st.integers(0, 3)),
    st.builds(lambda a, b: Const(F(a, b)), st.integers(-9, 9), st.integers(1, 9)))
terms = st.recursive(_leaf, lambda c: st.one_of(
    st.builds(Add, c, c), st.builds(Mul, c, c), st.builds(Relu, c)), max_leaves=12)


@settings(max_examples=300)
@given(terms)
def test_print_parse_roundtrip(t):
    assert parse_term(format_term(t)) == t


@settings(max_examples=200)
@given(terms, st.lists(st.fractions(-5, 5, max_denominator=8), min_size=4, max_size=4))
def test_relu_nonnegative_and_hash(t, vals):
    E = dict(enumerate(vals))
    assert eval_term(Relu(t), E) >= 0
    assert hash(parse_term(format_term(t))) == hash(t)
