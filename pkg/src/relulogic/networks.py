"""Rational-weight ReLU networks and the network surgeries used by the translations."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Mapping, Sequence

from .logic import Formula, eval_nodes, postorder, props, expand
from .terms import (Add, Const, Mul, ParseError, Relu, Term, Var, degree, is_proto_neuron,
                    parse_rational)

__all__ = [
    "Layer", "NeuralNetwork", "InflationResult", "network_to_terms", "increase_depth",
    "merge_networks", "formula_to_neuron", "inflate_to_integers", "network_from_json",
    "network_to_json", "FragmentError",
]


class FragmentError(ValueError):
    """Input lies outside the fragment a construction is defined for."""


@dataclass(frozen=True)
class Layer:
    """One fully connected ReLU layer: ``weights[j][i]`` feeds input i into neuron j."""

    weights: tuple
    biases: tuple

    def __post_init__(self):
        w = tuple(tuple(Fraction(x) for x in row) for row in self.weights)
        b = tuple(Fraction(x) for x in self.biases)
        if len(w) != len(b):
            raise ValueError(f"{len(w)} weight rows but {len(b)} biases")
        if not w:
            raise ValueError("a layer needs at least one neuron")
        if len({len(row) for row in w}) != 1:
            raise ValueError("ragged weight matrix")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "biases", b)

    @property
    def n_in(self):
        return len(self.weights[0])

    @property
    def n_out(self):
        return len(self.weights)


@dataclass(frozen=True)
class NeuralNetwork:
    """A feedforward ReLU network; ``input_vars`` are variable indices."""

    input_vars: tuple
    layers: tuple = ()

    def __post_init__(self):
        iv = tuple(int(v) for v in self.input_vars)
        if len(set(iv)) != len(iv):
            raise ValueError("input variables must be distinct")
        if not iv:
            raise ValueError("a network needs at least one input variable")
        layers = tuple(self.layers)
        width = len(iv)
        for n, layer in enumerate(layers):
            if layer.n_in != width:
                raise ValueError(f"layer {n} expects {layer.n_in} inputs, previous width is {width}")
            width = layer.n_out
        object.__setattr__(self, "input_vars", iv)
        object.__setattr__(self, "layers", layers)

    @property
    def depth(self):
        return len(self.layers)

    @property
    def n_outputs(self):
        return self.layers[-1].n_out if self.layers else len(self.input_vars)

    def forward(self, E: Mapping[int, Fraction]) -> list:
        """Exact forward pass; returns the output neuron values."""
        h = [Fraction(E[v]) for v in self.input_vars]
        for layer in self.layers:
            h = [max(Fraction(0), sum((w * x for w, x in zip(row, h)), b))
                 for row, b in zip(layer.weights, layer.biases)]
        return h


@dataclass(frozen=True)
class InflationResult:
    multiplier_D: int
    term: Term


# ------------------------------------------------------------------- JSON

def network_to_json(N: NeuralNetwork) -> str:
    doc = {
        "inputs": [f"x{v}" for v in N.input_vars],
        "layers": [{"weights": [[str(w) for w in row] for row in L.weights],
                    "biases": [str(b) for b in L.biases]} for L in N.layers],
    }
    return json.dumps(doc, indent=2)


def network_from_json(text: str) -> NeuralNetwork:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid network JSON: {e}") from None
    try:
        inputs = []
        for name in doc["inputs"]:
            if not (isinstance(name, str) and name.startswith("x") and name[1:].isdigit()):
                raise ParseError(f"bad input variable {name!r}")
            inputs.append(int(name[1:]))
        layers = []
        for L in doc.get("layers", []):
            w = [[_num(x) for x in row] for row in L["weights"]]
            b = [_num(x) for x in L["biases"]]
            layers.append(Layer(w, b))
        return NeuralNetwork(tuple(inputs), tuple(layers))
    except (KeyError, TypeError) as e:
        raise ParseError(f"malformed network JSON: {e}") from None
    except ValueError as e:
        if isinstance(e, ParseError):
            raise
        raise ParseError(f"malformed network: {e}") from None


def _num(x):
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        raise ParseError(f"numbers must be integers or 'p/q' strings, got {x!r}")
    return parse_rational(x)


# ------------------------------------------------------------------ unfold

def network_to_terms(N: NeuralNetwork) -> list:
    """Output neurons as terms ReLU(w·n′ + b), sums nested to the left."""
    cur = [Var(v) for v in N.input_vars]
    for layer in N.layers:
        nxt = []
        for row, b in zip(layer.weights, layer.biases):
            acc = None
            for w, t in zip(row, cur):
                s = Mul(Const(w), t)
                acc = s if acc is None else Add(acc, s)
            nxt.append(Relu(Add(acc, Const(b))))
        cur = nxt
    return cur


# ---------------------------------------------------------------- surgery

def increase_depth(N: NeuralNetwork, d_target: int) -> NeuralNetwork:
    """Append identity ReLU layers until the network has depth ``d_target``."""
    if d_target < N.depth:
        raise ValueError(f"cannot decrease depth {N.depth} to {d_target}")
    width = N.n_outputs
    ident = Layer(tuple(tuple(Fraction(int(i == j)) for i in range(width)) for j in range(width)),
                  (Fraction(0),) * width)
    return NeuralNetwork(N.input_vars, N.layers + (ident,) * (d_target - N.depth))


def _zeros(n):
    return (Fraction(0),) * n


def merge_networks(nets: Sequence[NeuralNetwork]) -> list:
    """Bring networks to a common depth and shared hidden layers.

    The returned networks read the union of all inputs (index-sorted) and
    share every layer below the output layer; each keeps only its own output
    neurons.  Several depth-1 networks are first deepened to depth 2 so that
    they share a hidden layer; depth-0 networks are not merged.
    """
    if not nets:
        raise ValueError("merge_networks needs at least one network")
    d = max(N.depth for N in nets)
    if d == 1 and len(nets) > 1:
        nets = [increase_depth(N, 2) for N in nets]
    order = sorted({v for N in nets for v in N.input_vars})
    return _align(nets, order)


def _align(nets, order=None):
    # Pad to common depth and share layers below the output; at depth 1 each
    # network is just re-indexed over the union of inputs.
    d = max(N.depth for N in nets)
    M = [increase_depth(N, d) for N in nets]
    if d == 0:
        return M
    if order is None:
        order = []
        for N in M:
            order += [v for v in N.input_vars if v not in order]
    inputs = list(order)
    col = {v: c for c, v in enumerate(inputs)}

    def first_rows(N):
        out = []
        for row in N.layers[0].weights:
            r = list(_zeros(len(inputs)))
            for v, w in zip(N.input_vars, row):
                r[col[v]] = w
            out.append(tuple(r))
        return out

    # shared layers 1..d-1, block diagonal above the first
    shared, offsets = [], None
    if d > 1:
        rows, biases = [], []
        for N in M:
            rows += first_rows(N)
            biases += N.layers[0].biases
        shared.append(Layer(tuple(rows), tuple(biases)))
        for lvl in range(1, d - 1):
            total_in = sum(N.layers[lvl - 1].n_out for N in M)
            rows, biases, off = [], [], 0
            for N in M:
                L = N.layers[lvl]
                for row in L.weights:
                    rows.append(_zeros(off) + row + _zeros(total_in - off - len(row)))
                biases += L.biases
                off += L.n_in
            shared.append(Layer(tuple(rows), tuple(biases)))
        # column offsets of each network's block below the output layer
        offsets, off = [], 0
        for N in M:
            offsets.append(off)
            off += N.layers[d - 2].n_out
        total = off

    out = []
    for t, N in enumerate(M):
        if d == 1:
            last = Layer(tuple(first_rows(N)), N.layers[0].biases)
        else:
            L = N.layers[-1]
            last = Layer(tuple(_zeros(offsets[t]) + row + _zeros(total - offsets[t] - len(row))
                               for row in L.weights), L.biases)
        out.append(NeuralNetwork(tuple(inputs), tuple(shared) + (last,)))
    return out


# ---------------------------------------------------- formulas to neurons

def formula_to_neuron(phi: Formula) -> NeuralNetwork:
    """Compile a formula of the ⊙-degree-≤1 fragment to a one-output network.

    Proposition-free subformulas are folded to their constant value.  The
    result agrees with ``phi`` on every input in [0,1].
    """
    if any(n.kind in ("ssum", "scsum") for n in postorder(phi)):
        phi = expand(phi)
    used = props(phi)
    dummy = next(i for i in range(len(used) + 1) if i not in used)
    # values of proposition-free nodes do not depend on the valuation
    val = eval_nodes(phi, {p: Fraction(0) for p in used})
    pf, memo = {}, {}
    for node in postorder(phi):
        pf[id(node)] = node.kind != "prop" and all(pf[id(a)] for a in node.args)
    for node in postorder(phi):
        if pf[id(node)]:
            continue
        memo[id(node)] = _neuron_step(node, memo, pf, val, dummy)
    if pf[id(phi)]:
        return _const_net(val[id(phi)], dummy)
    return memo[id(phi)]


def _const_net(r, dummy):
    return NeuralNetwork((dummy,), (Layer(((Fraction(0),),), (r,)),))


def _neuron_step(node, memo, pf, val, dummy):
    def sub(a):
        return _const_net(val[id(a)], dummy) if pf[id(a)] else memo[id(a)]

    k = node.kind
    if k == "prop":
        return NeuralNetwork((node.value,))
    if k == "prod":
        a, b = node.args
        if pf[id(a)]:
            r, inner = val[id(a)], memo[id(b)]
        elif pf[id(b)]:
            r, inner = val[id(b)], memo[id(a)]
        else:
            raise FragmentError("product of two proposition-carrying formulas (degree > 1)")
        return NeuralNetwork(inner.input_vars, inner.layers + (Layer(((r,),), (Fraction(0),)),))
    if k == "impp":
        raise FragmentError("product implication with propositions in scope")
    # ImpL: ReLU(-1 * ReLU(n_psi - n_theta) + 1)
    left, right = _align([sub(node.args[0]), sub(node.args[1])])
    one, zero = Fraction(1), Fraction(0)
    if left.depth == 0:
        inputs = list(left.input_vars) + [v for v in right.input_vars if v not in left.input_vars]
        row = [zero] * len(inputs)
        row[inputs.index(left.input_vars[0])] += one
        row[inputs.index(right.input_vars[0])] -= one
        body = NeuralNetwork(tuple(inputs), (Layer((tuple(row),), (zero,)),))
    else:
        lo, ro = left.layers[-1], right.layers[-1]
        stacked = Layer(lo.weights + ro.weights, lo.biases + ro.biases)
        diff = Layer(((one, -one),), (zero,))
        body = NeuralNetwork(left.input_vars, left.layers[:-1] + (stacked, diff))
    return NeuralNetwork(body.input_vars, body.layers + (Layer(((-one,),), (one,)),))


# ------------------------------------------------------- integer inflation

def _den(t, memo):
    """The multiplier D_t: denominators combined by lcm over + and product over ·."""
    key = id(t)
    if key not in memo:
        if isinstance(t, Const):
            d = t.value.denominator
        elif isinstance(t, Var):
            d = 1
        elif isinstance(t, Add):
            d = lcm(_den(t.left, memo), _den(t.right, memo))
        elif isinstance(t, Mul):
            d = _den(t.left, memo) * _den(t.right, memo)
        else:
            d = _den(t.arg, memo)
        memo[key] = d
    return memo[key]


def _push(t, m, den, memo):
    """Integer-constant term equal to m·t, where D_t divides m."""
    key = (id(t), m)
    hit = memo.get(key)
    if hit is not None:
        return hit
    if isinstance(t, Const):
        v = m * t.value
        assert v.denominator == 1
        out = Const(v)
    elif isinstance(t, Var):
        out = t if m == 1 else Mul(Const(Fraction(m)), t)
    elif isinstance(t, Add):
        out = Add(_push(t.left, m, den, memo), _push(t.right, m, den, memo))
    elif isinstance(t, Mul):
        dr = den(t.right)
        out = Mul(_push(t.left, m // dr, den, memo), _push(t.right, dr, den, memo))
    else:
        out = Relu(_push(t.arg, m, den, memo))
    memo[key] = out
    return out


def inflate_to_integers(t: Term) -> InflationResult:
    """Find D and an integer-constant proto-neuron s with s ≡ D·t."""
    if not is_proto_neuron(t):
        raise FragmentError(f"not a proto-neuron (degree {degree(t)})")
    dens = {}

    def den(u):
        return _den(u, dens)

    D = den(t)
    return InflationResult(D, _push(t, D, den, {}))
