"""Translations between ReLU terms/networks and formulas.

* :func:`term_to_formula` — any term to RPL(⊙) or ŁΠ½(→P⁻) under scaling.
* :func:`formula_to_term` — RPL(⊙) / ŁΠ½(→P⁻) formulas back to terms (no scaling).
* :func:`proto_neuron_to_logic` — proto-neurons to RPL or ŁΠ½(⊙⁻,→P⁻).
* :func:`luk_proto_to_formula` / :func:`formula_to_luk_proto` — the exact
  correspondence between 0̄-free Łukasiewicz formulas and Łukasiewicz
  proto-neurons.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil

from .connectives import iter_scaled_sum, scaled_add, scaled_mul
from .equiv import scale
from .logic import (Formula, LogicId, classify, eval_nodes, expand, half, impl, neg,
                    ominus, oplus, postorder, prop, props, rational_constant)
from .networks import FragmentError, NeuralNetwork, inflate_to_integers, network_to_terms
from .terms import (Add, Const, Mul, Relu, Term, Var, atomic_length, constants, eval_term,
                    is_proto_neuron, sub, variables)

__all__ = [
    "ScaledTranslation", "LukProtoNeuron", "compute_K_term", "term_to_formula",
    "formula_to_term", "proto_neuron_to_logic", "network_to_logic", "translate_terms",
    "luk_proto_to_formula", "formula_to_luk_proto", "luk_proto_term",
]

_TERM_TARGETS = (LogicId.RPLProd, LogicId.LPiHalf_ImpPMinus)
_PROTO_TARGETS = (LogicId.RPL, LogicId.LPiHalf_ProdMinus_ImpPMinus)


@dataclass(frozen=True)
class ScaledTranslation:
    """A formula claimed (i,k)-equivalent to its source term.

    ``multiplier_D`` and ``inner_scale`` record the integer inflation used by
    the proto-neuron construction (``inner_scale = k·D``); both are 1/k for
    plain term translations.
    """

    formula: Formula
    i_bound: Fraction
    k_value: Fraction
    K_min: int
    target: LogicId
    multiplier_D: int = 1
    inner_scale: Fraction = None
    strategy: str = "term"

    def __post_init__(self):
        if self.k_value < self.K_min:
            raise ValueError(f"k = {self.k_value} below K = {self.K_min}")
        if self.i_bound > self.k_value:
            raise ValueError(f"i = {self.i_bound} exceeds k = {self.k_value}")
        if self.inner_scale is None:
            object.__setattr__(self, "inner_scale", self.k_value)


def _positive(x, name):
    x = Fraction(x)
    if x <= 0:
        raise ValueError(f"{name} must be positive, got {x}")
    return x


def compute_K_term(t: Term, i) -> int:
    """K = max{j^(2·length(t)), 8} with j = max{⌈i⌉, ⌈r_max⌉, 2}."""
    i = _positive(i, "i")
    r_max = max((abs(c) for c in constants(t)), default=Fraction(0))
    j = max(ceil(i), ceil(r_max), 2)
    return max(j ** (2 * atomic_length(t)), 8)


def _resolve_k(k, K, i):
    if k is None:
        k = Fraction(K)
    k = _positive(k, "k")
    if k < K:
        raise ValueError(f"k = {k} is below the required K = {K}")
    if i > k:
        raise ValueError(f"i = {i} exceeds k = {k}")
    return k


def _int_k(k):
    if k.denominator != 1:
        raise ValueError(f"scaled multiplication needs an integer k, got {k}")
    return k.numerator


def _relu_formula(phi):
    return oplus(ominus(phi, half()), half())


def term_to_formula(t: Term, i, k=None, target: LogicId = LogicId.RPLProd) -> ScaledTranslation:
    """Formula (i,k)-equivalent to ``t``; k defaults to the computed K."""
    if target not in _TERM_TARGETS:
        raise ValueError(f"term translation targets {[x.name for x in _TERM_TARGETS]}, got {target.name}")
    i = _positive(i, "i")
    K = compute_K_term(t, i)
    k = _resolve_k(k, K, i)
    memo = {}

    def go(s):
        hit = memo.get(s)
        if hit is not None:
            return hit
        if isinstance(s, Const):
            out = rational_constant(scale(k, s.value), target)
        elif isinstance(s, Var):
            out = prop(s.index)
        elif isinstance(s, Add):
            out = scaled_add(go(s.left), go(s.right), target)
        elif isinstance(s, Mul):
            out = scaled_mul(_int_k(k), go(s.left), go(s.right), target)
        else:
            out = _relu_formula(go(s.arg))
        memo[s] = out
        return out

    return ScaledTranslation(go(t), i, k, K, target)


def translate_terms(ts, i, target: LogicId = LogicId.RPLProd, k=None, fn=None, **kw) -> list:
    """Translate a tuple of terms with one shared k (the largest component K)."""
    fn = fn or term_to_formula
    i = _positive(i, "i")
    if k is None:
        k = max(fn(t, i, target=target, **kw).K_min for t in ts)
    return [fn(t, i, k=k, target=target, **kw) for t in ts]


# ------------------------------------------------------------ logic to terms

def _one_minus_relu(a: Term, b: Term) -> Term:
    """1 − ReLU(a − b)."""
    return sub(Const(Fraction(1)), Relu(sub(a, b)))


def formula_to_term(phi: Formula) -> Term:
    """Term equivalent to ``phi`` on [0,1]-valued inputs (xᵢ stands for pᵢ).

    Defined for formulas whose product implications have proposition-free
    scope; such proposition-free subformulas become their constant value.
    """
    used = props(phi)
    val = None
    out = {}
    pf = {}
    for node in postorder(phi):
        k, a = node.kind, node.args
        pf[id(node)] = k != "prop" and all(pf[id(x)] for x in a)
        if k == "zero":
            t = Const(Fraction(0))
        elif k == "half":
            t = Const(Fraction(1, 2))
        elif k == "const":
            t = Const(node.value)
        elif k == "prop":
            t = Var(node.value)
        elif k == "impl":
            t = _one_minus_relu(out[id(a[0])], out[id(a[1])])
        elif k == "prod":
            t = Mul(out[id(a[0])], out[id(a[1])])
        elif k == "impp":
            if not pf[id(node)]:
                raise FragmentError("product implication with propositions in its scope")
            if val is None:
                val = eval_nodes(phi, {p: Fraction(0) for p in used})
            t = Const(val[id(node)])
        elif k == "ssum":
            # ⊙ₙ φ = min{1, n·φ} = 1 − ReLU(1 − n·φ)
            t = _one_minus_relu(Const(Fraction(1)), Mul(Const(Fraction(node.value)), out[id(a[0])]))
        else:
            t = formula_to_term(expand(node))
        out[id(node)] = t
    return out[id(phi)]


# ------------------------------------------------------- proto-neurons

def proto_neuron_to_logic(t: Term, i, target: LogicId = LogicId.RPL, k=None,
                          strategy: str = "inflate") -> ScaledTranslation:
    """Formula without propositional ⊙ for a proto-neuron ``t``.

    ``strategy="inflate"`` multiplies ``t`` by the least D making every
    constant an integer, builds the formula at scale k·D and uses
    K = max{⌈L_i/D⌉, ⌈i⌉} where L_i is the term bound of the inflated term.
    ``strategy="direct"`` skips inflation and works at scale k with
    K = compute_K_term(t, i); it requires every variable-carrying factor
    to be multiplied by an integer.
    """
    if target not in _PROTO_TARGETS:
        raise ValueError(f"proto-neuron translation targets {[x.name for x in _PROTO_TARGETS]}, "
                         f"got {target.name}")
    if not is_proto_neuron(t):
        raise FragmentError("not a proto-neuron")
    i = _positive(i, "i")
    if strategy == "inflate":
        inf = inflate_to_integers(t)
        D, s = inf.multiplier_D, inf.term
        K = max(-(-compute_K_term(s, i) // D), ceil(i))
    elif strategy == "direct":
        D, s = 1, t
        K = compute_K_term(t, i)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    k = _resolve_k(k, K, i)
    kk = k * D
    memo = {}

    def go(u):
        hit = memo.get(u)
        if hit is not None:
            return hit
        if isinstance(u, Const):
            out = rational_constant(scale(kk, u.value), target)
        elif isinstance(u, Var):
            out = prop(u.index)
        elif isinstance(u, Add):
            out = scaled_add(go(u.left), go(u.right), target)
        elif isinstance(u, Relu):
            out = _relu_formula(go(u.arg))
        else:
            lv, rv = variables(u.left), variables(u.right)
            if not lv and not rv:
                out = rational_constant(scale(kk, eval_term(u, {})), target)
            else:
                z, other = (eval_term(u.right, {}), u.left) if not rv else (eval_term(u.left, {}), u.right)
                if z.denominator != 1:
                    raise FragmentError(f"variable factor multiplied by non-integer {z}")
                out = iter_scaled_sum(abs(z.numerator), go(other), target)
                if z < 0:
                    out = neg(out)
        memo[u] = out
        return out

    return ScaledTranslation(go(s), i, k, K, target, multiplier_D=D, inner_scale=kk,
                             strategy=strategy)


def network_to_logic(N: NeuralNetwork, i, target: LogicId = LogicId.RPL, k=None,
                     strategy: str = "inflate") -> list:
    """One formula per output neuron, all sharing a single k."""
    return translate_terms(network_to_terms(N), i, target=target, k=k,
                           fn=proto_neuron_to_logic, strategy=strategy)


# ------------------------------------------------- Łukasiewicz round trip

@dataclass(frozen=True)
class LukProtoNeuron:
    """A term of the form x or k̄ − ReLU(t − t′) with t, t′ again of this form."""

    term: Term
    k: Fraction = Fraction(1)

    def __post_init__(self):
        k = _positive(self.k, "k")
        object.__setattr__(self, "k", k)
        _luk_parts(self.term, k)


def luk_proto_term(k, a: Term, b: Term) -> Term:
    """k̄ − ReLU(a − b), using the parser's desugaring of binary minus."""
    return sub(Const(Fraction(k)), Relu(sub(a, b)))


def _luk_parts(t, k):
    if isinstance(t, Var):
        return None
    try:
        c, m = t.left, t.right
        r = m.right
        a, mb = r.arg.left, r.arg.right
        b = mb.right
        ok = (isinstance(t, Add) and c == Const(k) and isinstance(m, Mul)
              and m.left == Const(Fraction(-1)) and isinstance(r, Relu)
              and isinstance(r.arg, Add) and isinstance(mb, Mul)
              and mb.left == Const(Fraction(-1)))
    except AttributeError:
        ok = False
    if not ok:
        raise FragmentError(f"not a Łukasiewicz proto-neuron over k={k}")
    _luk_parts(a, k)
    _luk_parts(b, k)
    return a, b


def luk_proto_to_formula(lp: LukProtoNeuron, i=None) -> Formula:
    """Ł formula (i,k)-equivalent to the proto-neuron; needs 0 < i ≤ k."""
    i = lp.k if i is None else _positive(i, "i")
    if i > lp.k:
        raise ValueError(f"i = {i} exceeds k = {lp.k}")

    def go(t):
        parts = _luk_parts(t, lp.k)
        if parts is None:
            return prop(t.index)
        return impl(go(parts[0]), go(parts[1]))

    return go(lp.term)


def formula_to_luk_proto(phi: Formula) -> LukProtoNeuron:
    """Łukasiewicz proto-neuron over k = 1 for a formula of Ł without 0̄."""
    if LogicId.LukNoZero not in classify(phi).logic_memberships:
        raise FragmentError("formula is not in Łukasiewicz logic without 0")
    return LukProtoNeuron(formula_to_term(phi), Fraction(1))
