"""Hash-consed formulas of Ł, RPL, RPL(⊙) and ŁΠ½ with exact [0,1] semantics.

Every formula node is interned: building the same structure twice returns the
same object, so ``is``/``==`` is structural equality and shared subformulas
are evaluated once.
"""

from __future__ import annotations

import enum
import threading
import weakref
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Mapping, Optional

__all__ = [
    "Formula", "LogicId", "FragmentInfo", "zero", "half", "truth_const",
    "prop", "impl", "prod", "impp", "iter_strong_node", "iter_scaled_node",
    "neg", "oplus", "otimes", "ominus", "wedge", "vee", "biimpl", "derived",
    "rational_constant", "underline", "eval_formula", "eval_nodes", "props", "is_prop_free",
    "classify", "expand", "node_count", "postorder", "quarter_for",
]

ONE = Fraction(1)
HALF = Fraction(1, 2)
_Z = Fraction(0)


class LogicId(enum.Enum):
    Luk = "luk"
    LukNoZero = "luk-no-zero"
    RPL = "rpl"
    RPLProd = "rplprod"
    LPiHalf = "lpihalf"
    LPiHalf_ImpPMinus = "lpihalf-impp-"
    LPiHalf_ProdMinus_ImpPMinus = "lpihalf-prod-impp-"

    @property
    def uses_truth_constants(self):
        return self in (LogicId.RPL, LogicId.RPLProd)

    @property
    def is_lpihalf(self):
        return self in (LogicId.LPiHalf, LogicId.LPiHalf_ImpPMinus,
                        LogicId.LPiHalf_ProdMinus_ImpPMinus)


class Formula:
    """An interned formula node.  Build with the module-level constructors.

    ``kind`` is one of zero, half, const, prop, impl, prod, impp, ssum, scsum;
    ``value`` holds the constant, proposition index or iteration count.
    """

    __slots__ = ("kind", "value", "args", "_order", "__weakref__")

    def __setattr__(self, name, value):
        raise AttributeError("Formula nodes are immutable")

    # convenient accessors
    @property
    def left(self):
        return self.args[0]

    @property
    def right(self):
        return self.args[1]

    @property
    def body(self):
        return self.args[0]

    def __repr__(self):
        from .syntax import format_formula
        return f"Formula({format_formula(self)!r})"

    def __str__(self):
        from .syntax import format_formula
        return format_formula(self)

    def __reduce__(self):
        return (_rebuild, (self.kind, self.value, self.args))


_table: "weakref.WeakValueDictionary" = weakref.WeakValueDictionary()
_lock = threading.Lock()


def _intern(kind, value, args=()):
    key = (kind, value, tuple(id(a) for a in args))
    with _lock:
        node = _table.get(key)
        if node is None:
            node = object.__new__(Formula)
            object.__setattr__(node, "kind", kind)
            object.__setattr__(node, "value", value)
            object.__setattr__(node, "args", tuple(args))
            object.__setattr__(node, "_order", None)
            _table[key] = node
        return node


def _rebuild(kind, value, args):
    return _intern(kind, value, args)


def _check(*fs):
    for f in fs:
        if not isinstance(f, Formula):
            raise TypeError(f"expected Formula, got {type(f).__name__}")


def zero() -> Formula:
    return _intern("zero", None)


def half() -> Formula:
    return _intern("half", None)


def truth_const(r) -> Formula:
    """Truth constant r̄; 0 and 1/2 are canonicalised to 0̄ and ½̄."""
    r = Fraction(r)
    if not 0 <= r <= 1:
        raise ValueError(f"truth constant {r} outside [0,1]")
    if r == 0:
        return zero()
    if r == HALF:
        return half()
    return _intern("const", r)


def prop(i: int) -> Formula:
    if not isinstance(i, int) or i < 0:
        raise ValueError(f"proposition index must be a natural number, got {i!r}")
    return _intern("prop", i)


def impl(a: Formula, b: Formula) -> Formula:
    """Łukasiewicz implication a →L b."""
    _check(a, b)
    return _intern("impl", None, (a, b))


def prod(a: Formula, b: Formula) -> Formula:
    """Product conjunction a ⊙ b."""
    _check(a, b)
    return _intern("prod", None, (a, b))


def impp(a: Formula, b: Formula) -> Formula:
    """Product implication a →P b."""
    _check(a, b)
    return _intern("impp", None, (a, b))


def iter_strong_node(n: int, body: Formula) -> Formula:
    """Abbreviation node ⊙ₙ body (n-fold strong sum)."""
    _check(body)
    if n < 0:
        raise ValueError("iteration count must be non-negative")
    return _intern("ssum", int(n), (body,))


def iter_scaled_node(n: int, body: Formula, quarter: Formula) -> Formula:
    """Abbreviation node ⊙′ₙ body; ``quarter`` is the 1/4 constant used by ⊕′."""
    _check(body, quarter)
    if n < 0:
        raise ValueError("iteration count must be non-negative")
    return _intern("scsum", int(n), (body, quarter))


# ----------------------------------------------------- derived connectives

def neg(a):
    return impl(a, zero())


def oplus(a, b):
    return impl(neg(a), b)


def otimes(a, b):
    return neg(impl(a, neg(b)))


def ominus(a, b):
    return otimes(a, neg(b))


def wedge(a, b):
    return otimes(a, impl(a, b))


def vee(a, b):
    return impl(impl(a, b), b)


def biimpl(a, b):
    return wedge(impl(a, b), impl(b, a))


_DERIVED = {
    "neg": neg, "~L": neg, "¬": neg,
    "oplus": oplus, "(+)": oplus, "⊕": oplus,
    "otimes": otimes, "(x)": otimes, "⊗": otimes,
    "ominus": ominus, "(-)": ominus, "⊖": ominus,
    "wedge": wedge, "/\\": wedge, "∧": wedge,
    "vee": vee, "\\/": vee, "∨": vee,
    "biimpl": biimpl, "<->L": biimpl, "↔": biimpl,
}


def derived(connective: str, *args: Formula) -> Formula:
    """Build a derived Łukasiewicz connective by name (``"oplus"``, ``"(+)"``, ``"⊕"``, ...)."""
    try:
        fn = _DERIVED[connective]
    except KeyError:
        raise ValueError(f"unknown derived connective {connective!r}") from None
    return fn(*args)


# ---------------------------------------------------- rational constants

_underline_cache: dict = {}


def underline(r) -> Formula:
    """Proposition-free ŁΠ½ formula with value exactly ``r`` (r ∈ [0,1] ∩ ℚ).

    Dyadic r are built from ½̄ by products and strong sums; any other r is a
    product-implication quotient of two dyadics.
    """
    r = Fraction(r)
    if not 0 <= r <= 1:
        raise ValueError(f"constant {r} outside [0,1]")
    hit = _underline_cache.get(r)
    if hit is not None:
        return hit
    k, l = r.numerator, r.denominator
    if r == 0:
        out = zero()
    elif r == 1:
        out = neg(zero())
    elif l & (l - 1) == 0:
        j = l.bit_length() - 1
        if k == 1:
            out = half() if j == 1 else prod(underline(Fraction(1, 2 ** (j - 1))), half())
        else:
            # k odd here since the fraction is reduced
            out = oplus(underline(Fraction(k - 1, l)), underline(Fraction(1, l)))
    else:
        m = max(k, l).bit_length()  # smallest m with k, l < 2**m
        out = impp(underline(Fraction(l, 2 ** m)), underline(Fraction(k, 2 ** m)))
    _underline_cache[r] = out
    return out


def rational_constant(r, logic: LogicId) -> Formula:
    r = Fraction(r)
    if not 0 <= r <= 1:
        raise ValueError(f"constant {r} outside [0,1]")
    if logic.uses_truth_constants:
        return truth_const(r)
    if logic.is_lpihalf:
        return underline(r)
    if r == 0:
        return zero()
    if r == 1 and logic is LogicId.Luk:
        return neg(zero())
    raise ValueError(f"{logic.name} has no constant {r}")


def quarter_for(logic: LogicId) -> Formula:
    """The 1/4 constant used by ⊕′ in ``logic``."""
    if logic.uses_truth_constants:
        return truth_const(Fraction(1, 4))
    if logic.is_lpihalf:
        return underline(Fraction(1, 4))
    raise ValueError(f"{logic.name} cannot express the scaled connectives")


# ------------------------------------------------------------- traversal

def postorder(phi: Formula) -> list:
    """Distinct nodes of the DAG, children before parents (cached per root)."""
    cached = phi._order
    if cached is not None:
        return cached
    seen, out = set(), []
    stack = [(phi, False)]
    while stack:
        node, done = stack.pop()
        if done:
            out.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for a in reversed(node.args):
            if id(a) not in seen:
                stack.append((a, False))
    object.__setattr__(phi, "_order", out)
    return out


def node_count(phi: Formula) -> int:
    return len(postorder(phi))


def props(phi: Formula) -> set:
    return {n.value for n in postorder(phi) if n.kind == "prop"}


def is_prop_free(phi: Formula) -> bool:
    return not any(n.kind == "prop" for n in postorder(phi))


# ------------------------------------------------------------- semantics

def _scaled_sum_value(n, v, q):
    memo = {0: HALF, 1: v}

    def f(m):
        hit = memo.get(m)
        if hit is not None:
            return hit
        a = 1 << ((m - 1).bit_length() - 1)
        x, y = f(a) - q, f(m - a) - q
        s = (x if x > 0 else _Z) + (y if y > 0 else _Z)
        memo[m] = s = s if s < 1 else ONE
        return s

    return f(n)


def eval_formula(phi: Formula, V: Mapping[int, Fraction]) -> Fraction:
    """Exact truth value of ``phi`` under valuation ``V`` (index -> [0,1])."""
    order = postorder(phi)
    if not any(n.kind in ("prod", "impp") for n in order):
        return _eval_on_lattice(order, V)
    return eval_nodes(phi, V)[id(phi)]


def _eval_on_lattice(order, V):
    # Without ⊙ and →P every value stays in (1/L)ℤ, L the lcm of all input
    # denominators, so evaluate on integer numerators and skip gcds.
    L = 2
    for node in order:
        if node.kind == "const":
            L = lcm(L, node.value.denominator)
        elif node.kind == "prop":
            try:
                r = Fraction(V[node.value])
            except KeyError:
                raise KeyError(f"valuation has no value for p{node.value}") from None
            if not 0 <= r <= 1:
                raise ValueError(f"valuation value {r} for p{node.value} outside [0,1]")
            L = lcm(L, r.denominator)
    val = {}
    for node in order:
        k, a = node.kind, node.args
        if k == "impl":
            r = L - val[id(a[0])] + val[id(a[1])]
            r = r if r < L else L
        elif k == "prop":
            r = Fraction(V[node.value]) * L
            r = r.numerator
        elif k == "zero":
            r = 0
        elif k == "half":
            r = L // 2
        elif k == "const":
            r = node.value.numerator * (L // node.value.denominator)
        elif k == "ssum":
            r = node.value * val[id(a[0])]
            r = r if r < L else L
        else:
            r = _scaled_sum_int(node.value, val[id(a[0])], val[id(a[1])], L)
        val[id(node)] = r
    return Fraction(val[id(order[-1])], L)


def _scaled_sum_int(n, v, q, L):
    memo = {0: L // 2, 1: v}

    def f(m):
        hit = memo.get(m)
        if hit is not None:
            return hit
        a = 1 << ((m - 1).bit_length() - 1)
        x, y = f(a) - q, f(m - a) - q
        s = (x if x > 0 else 0) + (y if y > 0 else 0)
        memo[m] = s = s if s < L else L
        return s

    return f(n)


def eval_nodes(phi: Formula, V: Mapping[int, Fraction]) -> dict:
    """Values of every node of ``phi``'s DAG, keyed by ``id(node)``."""
    val = {}
    for node in postorder(phi):
        k = node.kind
        if k == "impl":
            a, b = val[id(node.args[0])], val[id(node.args[1])]
            r = 1 - a + b
            r = r if r < 1 else ONE
        elif k == "prop":
            try:
                r = Fraction(V[node.value])
            except KeyError:
                raise KeyError(f"valuation has no value for p{node.value}") from None
            if not 0 <= r <= 1:
                raise ValueError(f"valuation value {r} for p{node.value} outside [0,1]")
        elif k == "prod":
            r = val[id(node.args[0])] * val[id(node.args[1])]
        elif k == "impp":
            a, b = val[id(node.args[0])], val[id(node.args[1])]
            r = ONE if a <= b else b / a
        elif k == "zero":
            r = _Z
        elif k == "half":
            r = HALF
        elif k == "const":
            r = node.value
        elif k == "ssum":
            r = node.value * val[id(node.args[0])]
            r = r if r < 1 else ONE
        else:  # scsum
            r = _scaled_sum_value(node.value, val[id(node.args[0])], val[id(node.args[1])])
        val[id(node)] = r
    return val


# -------------------------------------------------------------- expansion

def expand(phi: Formula, max_nodes: int = 1_000_000) -> Formula:
    """Replace every ⊙ₙ / ⊙′ₙ abbreviation by its primitive definition.

    Raises ``ValueError`` when the result would exceed roughly ``max_nodes``
    nodes (iteration counts from the translations can be astronomically large).
    """
    budget = [max_nodes]
    out = {}

    def spend(n):
        budget[0] -= n
        if budget[0] < 0:
            raise ValueError(f"expansion exceeds {max_nodes} nodes")

    for node in postorder(phi):
        k = node.kind
        if k == "ssum":
            body = out[id(node.args[0])]
            spend(4 * node.value)
            acc = zero()
            for _ in range(node.value):
                acc = oplus(acc, body)
            res = acc
        elif k == "scsum":
            body, q = out[id(node.args[0])], out[id(node.args[1])]
            res = _expand_scaled(node.value, body, q, spend)
        elif node.args:
            res = _intern(k, node.value, tuple(out[id(a)] for a in node.args))
        else:
            res = node
        out[id(node)] = res
    return out[id(phi)]


def _expand_scaled(n, body, q, spend):
    memo = {0: half(), 1: body}

    def f(m):
        hit = memo.get(m)
        if hit is not None:
            return hit
        spend(16)
        a = 1 << ((m - 1).bit_length() - 1)
        memo[m] = r = oplus(ominus(f(a), q), ominus(f(m - a), q))
        return r

    return f(n)


# ---------------------------------------------------------- classification

_LUK = frozenset({"zero", "prop", "impl"})
_RPL = frozenset({"zero", "half", "const", "prop", "impl"})
_LPI = frozenset({"zero", "half", "prop", "impl", "prod", "impp"})


@dataclass(frozen=True)
class FragmentInfo:
    logic_memberships: frozenset
    prop_free: bool
    min_prod_degree: Optional[int]
    impP_scopes_prop_free: bool
    prod_scopes_prop_free: bool
    constant_value: Optional[Fraction] = None
    primitives: frozenset = field(default=frozenset())

    def in_fragment(self, logic: LogicId, n: int) -> bool:
        """Membership in the level-``n`` fragment L_{≤n} of ``logic``."""
        return (logic in self.logic_memberships and self.min_prod_degree is not None
                and self.min_prod_degree <= n)

    def to_json(self) -> dict:
        order = list(LogicId)
        mem = sorted(self.logic_memberships, key=order.index)
        levels = {}
        if self.min_prod_degree is not None:
            for lg in (LogicId.RPLProd, LogicId.LPiHalf_ImpPMinus):
                if lg in self.logic_memberships:
                    levels[lg.name] = f"<={self.min_prod_degree}"
        return {
            "logics": [lg.name for lg in mem],
            "prop_free": self.prop_free,
            "min_prod_degree": self.min_prod_degree,
            "fragment_levels": levels,
            "impP_scopes_prop_free": self.impP_scopes_prop_free,
            "prod_scopes_prop_free": self.prod_scopes_prop_free,
            "constant_value": None if self.constant_value is None else str(self.constant_value),
        }


def classify(phi: Formula) -> FragmentInfo:
    """Which logics/fragments ``phi`` belongs to, judged on its primitive expansion."""
    kinds, has_p, deg = {}, {}, {}
    impp_ok = prod_ok = True
    for node in postorder(phi):
        k, a = node.kind, node.args
        i = id(node)
        if k in ("zero", "half", "const"):
            kinds[i], has_p[i], deg[i] = frozenset({k}), False, 0
            continue
        if k == "prop":
            kinds[i], has_p[i], deg[i] = frozenset({k}), True, 1
            continue
        if k == "ssum":
            if node.value == 0:
                kinds[i], has_p[i], deg[i] = frozenset({"zero"}), False, 0
            else:
                b = id(a[0])
                kinds[i] = kinds[b] | {"impl", "zero"}
                has_p[i], deg[i] = has_p[b], deg[b]
            continue
        if k == "scsum":
            b, q = id(a[0]), id(a[1])
            if node.value == 0:
                kinds[i], has_p[i], deg[i] = frozenset({"half"}), False, 0
            elif node.value == 1:
                kinds[i], has_p[i], deg[i] = kinds[b], has_p[b], deg[b]
            else:
                kinds[i] = kinds[b] | kinds[q] | {"impl", "zero"}
                has_p[i] = has_p[b] or has_p[q]
                d = (deg[b], deg[q])
                deg[i] = None if None in d else max(d)
            continue
        l, r = id(a[0]), id(a[1])
        kinds[i] = kinds[l] | kinds[r] | {k}
        has_p[i] = has_p[l] or has_p[r]
        if not has_p[i]:
            deg[i] = 0
        elif k == "impl":
            deg[i] = None if None in (deg[l], deg[r]) else max(deg[l], deg[r])
        elif k == "prod":
            prod_ok = False
            deg[i] = None if None in (deg[l], deg[r]) else deg[l] + deg[r]
        else:
            impp_ok = False
            deg[i] = None
    top = id(phi)
    used = kinds[top]
    mem = set()
    if used <= _LUK:
        mem.add(LogicId.Luk)
        if "zero" not in used:
            mem.add(LogicId.LukNoZero)
    if used <= _RPL:
        mem.add(LogicId.RPL)
    if used <= _RPL | {"prod"}:
        mem.add(LogicId.RPLProd)
    if used <= _LPI:
        mem.add(LogicId.LPiHalf)
        if impp_ok:
            mem.add(LogicId.LPiHalf_ImpPMinus)
            if prod_ok:
                mem.add(LogicId.LPiHalf_ProdMinus_ImpPMinus)
    pf = not has_p[top]
    return FragmentInfo(
        logic_memberships=frozenset(mem),
        prop_free=pf,
        min_prod_degree=deg[top],
        impP_scopes_prop_free=impp_ok,
        prod_scopes_prop_free=prod_ok,
        constant_value=eval_formula(phi, {}) if pf else None,
        primitives=used,
    )
