"""Acceptance criteria 1-10, one test each; every test prints one PASS/FAIL line."""

import random
import time
from fractions import Fraction as F
from math import ceil, floor, isqrt

from conftest import ACCEPTANCE_LINES
from gen import random_luk_nozero, random_rplprod, random_rplprod_le1, random_term
from relulogic import (Layer, LogicId, NeuralNetwork, check_ik_equivalence, check_k_equivalence,
                       check_plain_equivalence, classify, degree, eval_formula, eval_term,
                       expand, formula_to_luk_proto, formula_to_neuron, formula_to_term,
                       increase_depth, iter_scaled_sum, iter_strong_sum, luk_proto_to_formula,
                       merge_networks, network_to_logic, network_to_terms, parse_formula,
                       parse_term, proto_neuron_to_logic, prop, rational_constant, scale,
                       scaled_add, scaled_mul, term_to_formula)
from relulogic.equiv import make_grid, random_assignments
from relulogic.logic import is_prop_free, props


def report(n, ok, detail):
    line = f"CRITERION {n}: {'PASS' if ok else 'FAIL'} - {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def rand_rat(rng, lo, hi, max_den=64):
    d = rng.randint(1, max_den)
    return F(rng.randint(ceil(lo * d), floor(hi * d)), d)


# --------------------------------------------------------------------- 1

def test_criterion_1_worked_example():
    t = parse_term("ReLU(x0 + x0*x1) + x1")
    E = {0: F(3), 1: F(1, 2)}
    eval_term(t, E)  # warm-up
    t0 = time.perf_counter()
    v = eval_term(t, E)
    dt = time.perf_counter() - t0
    report(1, v == 5 and dt < 1e-3, f"value {v}, {dt * 1e6:.0f} us")


# --------------------------------------------------------------------- 2

def test_criterion_2_rational_definability():
    t0 = time.perf_counter()
    bad, n = [], 0
    for b in range(1, 65):
        for a in range(0, b + 1):
            r = F(a, b)
            phi = rational_constant(r, LogicId.LPiHalf)
            n += 1
            if not is_prop_free(phi) or eval_formula(phi, {}) != r:
                bad.append(r)
    dt = time.perf_counter() - t0
    report(2, not bad and dt < 5, f"{n} fractions, {len(bad)} wrong, {dt:.2f} s")


# --------------------------------------------------------------------- 3

def _sqrt_bounded(rng, k):
    # rational l with l*l <= k
    m = isqrt(k) + 1
    while True:
        l = rand_rat(rng, -m, m)
        if l * l <= k:
            return l


def test_criterion_3_auxiliary_connectives():
    rng = random.Random(3)
    t0 = time.perf_counter()
    p, q = prop(0), prop(1)
    fails = []
    # ⊙ₙ: no range condition
    for n in range(65):
        phi = expand(iter_strong_sum(n, p))
        for _ in range(200):
            v = rand_rat(rng, 0, 1)
            if eval_formula(phi, {0: v}) != min(F(1), n * v):
                fails.append(("strong", n, v))
    for k in (8, 9, 16, 64):
        add = expand(scaled_add(p, q))
        mul = expand(scaled_mul(k, p, q))
        for _ in range(200):
            l, l2 = rand_rat(rng, F(-k, 2), F(k, 2)), rand_rat(rng, F(-k, 2), F(k, 2))
            if eval_formula(add, {0: scale(k, l), 1: scale(k, l2)}) != scale(k, l + l2):
                fails.append(("add", k, l, l2))
            n = rng.randint(0, 16)
            j = max(n - 1, 0).bit_length()  # smallest j with n <= 2**j
            l = rand_rat(rng, F(-k, 2 ** j), F(k, 2 ** j))
            scs = expand(iter_scaled_sum(n, p))
            if eval_formula(scs, {0: scale(k, l)}) != scale(k, n * l):
                fails.append(("scaled-sum", k, n, l))
            l, l2 = _sqrt_bounded(rng, k), _sqrt_bounded(rng, k)
            if eval_formula(mul, {0: scale(k, l), 1: scale(k, l2)}) != scale(k, l * l2):
                fails.append(("mul", k, l, l2))
    dt = time.perf_counter() - t0
    report(3, not fails and dt < 30, f"{len(fails)} mismatches, {dt:.2f} s"
           + (f", first {fails[0]}" if fails else ""))


# --------------------------------------------------------------- 4 and 6

def _backward_cases():
    rng = random.Random(4)
    return [random_rplprod(rng, depth=5, max_den=16) for _ in range(500)]


def _forward_cases():
    rng = random.Random(5)
    return [random_term(rng, max_len=4, nvars=3, bound=3, max_den=4) for _ in range(200)]


def test_criterion_4_backward():
    t0 = time.perf_counter()
    fails = 0
    for n, phi in enumerate(_backward_cases()):
        t = formula_to_term(phi)
        pts = random_assignments(props(phi), 50, seed=n, max_den=32)
        fails += not check_plain_equivalence(phi, t, pts).passed
    dt = time.perf_counter() - t0
    report(4, fails == 0 and dt < 60, f"500 formulas x 50 valuations, {fails} failing, {dt:.2f} s")


def test_criterion_5_forward():
    t0 = time.perf_counter()
    fails = 0
    for t in _forward_cases():
        tr = term_to_formula(t, 1)
        fails += not check_ik_equivalence(tr.formula, t, 1, tr.k_value).passed
    dt = time.perf_counter() - t0
    report(5, fails == 0 and dt < 120, f"200 terms on 5^n grid, {fails} failing, {dt:.2f} s")


def test_criterion_6_degree_correspondence():
    viol = 0
    for t in _forward_cases():
        viol += classify(term_to_formula(t, 1).formula).min_prod_degree > degree(t)
    for phi in _backward_cases():
        viol += degree(formula_to_term(phi)) > classify(phi).min_prod_degree
    report(6, viol == 0, f"{viol} violations over 700 cases")


# --------------------------------------------------------------------- 7

TWO_LAYER = NeuralNetwork((0, 1), (Layer([[4, 8], [9, 7]], [-5, 3]), Layer([[-8, 2]], [5])))


def test_criterion_7_network_goldens():
    t0 = time.perf_counter()
    N = formula_to_neuron(parse_formula("1/3 ->L (p0 (.) 1/2)"))
    rows = [[list(r) + [b] for r, b in zip(L.weights, L.biases)] for L in N.layers]
    imp_net = rows == [[[0, 0, F(1, 3)], [0, F(1, 2), 0]], [[1, -1, 0]], [[-1, 1]]]
    imp_net = imp_net and N.input_vars == (1, 0)
    [tr] = network_to_logic(TWO_LAYER, 1)
    o = network_to_terms(TWO_LAYER)[0]
    rep = check_ik_equivalence(tr.formula, o, 1, tr.k_value, make_grid({0, 1}, [-1, 0, 1]))
    dt = time.perf_counter() - t0
    ok = imp_net and rep.passed and tr.K_min == 9 ** 26 and dt < 10
    report(7, ok, f"implication network structure {imp_net}, two-layer (1,k) check {rep.passed} "
                  f"on {rep.points_checked} points with K = 9^26: {tr.K_min == 9 ** 26}, {dt:.2f} s")


# --------------------------------------------------------------------- 8

def test_criterion_8_pipeline():
    rng = random.Random(8)
    t0 = time.perf_counter()
    fails, first = 0, None
    for n in range(100):
        phi = random_rplprod_le1(rng)
        t = network_to_terms(formula_to_neuron(phi))[0]
        tr = proto_neuron_to_logic(t, 1, LogicId.RPL)
        pts = random_assignments(props(phi) | props(tr.formula), 50, seed=n)
        rep = check_k_equivalence(tr.formula, phi, tr.k_value, pts)
        if not rep.passed:
            fails += 1
            first = first or str(phi)
    dt = time.perf_counter() - t0
    report(8, fails == 0 and dt < 120, f"{100 - fails}/100 formulas k-equivalent, {dt:.2f} s"
           + (f", first failure {first!r}" if first else ""))


# --------------------------------------------------------------------- 9

def test_criterion_9_lukasiewicz_roundtrip():
    rng = random.Random(9)
    t0 = time.perf_counter()
    bad = 0
    for _ in range(200):
        phi = random_luk_nozero(rng, depth=6)
        bad += luk_proto_to_formula(formula_to_luk_proto(phi), 1) is not phi
    dt = time.perf_counter() - t0
    report(9, bad == 0 and dt < 10, f"{200 - bad}/200 identical, {dt:.2f} s")


# -------------------------------------------------------------------- 10

N1 = NeuralNetwork((1, 2), (Layer([[1, -2], [F(1, 2), 3]], [0, -1]),
                            Layer([[2, -1], [-1, F(1, 3)]], [1, F(1, 2)])))
N2 = NeuralNetwork((2, 3), (Layer([[-1, 4], [2, 2]], [1, -3]),
                            Layer([[3, -1]], [F(-1, 2)])))


def test_criterion_10_network_surgery():
    t0 = time.perf_counter()
    M1, M2 = merge_networks([N1, N2])
    ok = M1.layers[:-1] == M2.layers[:-1] and M1.input_vars == M2.input_vars == (1, 2, 3)
    # zero cross-weights: N1 hidden neurons ignore x3, N2 ones ignore x1
    h = M1.layers[0].weights
    ok = ok and all(h[j][2] == 0 for j in (0, 1)) and all(h[j][0] == 0 for j in (2, 3))
    ok = ok and all(r[2:] == (0, 0) for r in M1.layers[1].weights)
    ok = ok and all(r[:2] == (0, 0) for r in M2.layers[1].weights)
    vals = [F(0), F(1, 2), F(1)]
    for E in make_grid({1, 2}, vals):
        for x3 in vals:
            ok = ok and M1.forward({**E, 3: x3}) == N1.forward(E)
    for E in make_grid({2, 3}, vals):
        for x1 in vals:
            ok = ok and M2.forward({**E, 1: x1}) == N2.forward(E)
    # depth increase: [0,1] grid for depth 0, full range for depth >= 1
    d0 = NeuralNetwork((0,))
    ok = ok and all(increase_depth(d0, 2).forward(E) == d0.forward(E)
                    for E in make_grid({0}, vals))
    full = [F(-2), F(-1, 2), F(0), F(3, 2), F(2)]
    ok = ok and all(increase_depth(N1, 4).forward(E) == N1.forward(E)
                    for E in make_grid({1, 2}, full))
    dt = time.perf_counter() - t0
    report(10, ok and dt < 5, f"merge/deepen checks {'hold' if ok else 'violated'}, {dt:.2f} s")
