"""ReLU-polynomials over the rationals: AST, parser, printer, exact evaluation.

A term is built from rational constants, variables ``x0, x1, ...``, binary
``+`` and ``*`` and the unary ``ReLU``.  Values are immutable and compared
structurally.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

__all__ = [
    "Term", "Const", "Var", "Add", "Mul", "Relu", "ParseError",
    "parse_term", "format_term", "eval_term", "degree", "atomic_length",
    "subterms", "is_proto_neuron", "terms_equal_on_grid", "variables",
    "constants", "neg", "sub", "sum_terms", "parse_rational",
]


class ParseError(ValueError):
    """Raised on malformed term/formula/network text."""


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"``, ``"-3"`` or an int/Fraction into a Fraction.

    Decimal points and floats are rejected so that no value is ever rounded.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise ParseError(f"not a rational: {text!r}")
    m = re.fullmatch(r"\s*(-?\d+)(?:\s*/\s*(\d+))?\s*", text)
    if not m:
        raise ParseError(f"not a rational: {text!r}")
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ParseError(f"zero denominator in {text!r}")
    return Fraction(int(m.group(1)), den)


class _Node:
    """Structural equality with a cached hash.

    Unfolded networks share subterm objects, so a term may be exponentially
    larger as a tree than as a graph; hashing once per object keeps
    dictionary lookups cheap.
    """

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((type(self).__name__,) + tuple(getattr(self, f) for f in self.__dataclass_fields__))
            object.__setattr__(self, "_hash", h)
        return h

    def __eq__(self, other):
        if self is other:
            return True
        if type(self) is not type(other) or hash(self) != hash(other):
            return False
        return all(getattr(self, f) == getattr(other, f) for f in self.__dataclass_fields__)


@dataclass(frozen=True, eq=False)
class Const(_Node):
    value: Fraction

    def __post_init__(self):
        if not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))

    def __str__(self):
        return format_term(self)


@dataclass(frozen=True, eq=False)
class Var(_Node):
    index: int

    def __post_init__(self):
        if not isinstance(self.index, int) or self.index < 0:
            raise ValueError(f"variable index must be a natural number, got {self.index!r}")

    def __str__(self):
        return format_term(self)


@dataclass(frozen=True, eq=False)
class Add(_Node):
    left: "Term"
    right: "Term"

    def __str__(self):
        return format_term(self)


@dataclass(frozen=True, eq=False)
class Mul(_Node):
    left: "Term"
    right: "Term"

    def __str__(self):
        return format_term(self)


@dataclass(frozen=True, eq=False)
class Relu(_Node):
    arg: "Term"

    def __str__(self):
        return format_term(self)


Term = Union[Const, Var, Add, Mul, Relu]


def neg(t: Term) -> Term:
    """``-t``, written as ``-1 * t``."""
    return Mul(Const(Fraction(-1)), t)


def sub(a: Term, b: Term) -> Term:
    """``a - b`` as ``a + (-1 * b)``."""
    return Add(a, neg(b))


def sum_terms(ts: Iterable[Term]) -> Term:
    """Left-nested sum of a non-empty sequence."""
    it = iter(ts)
    try:
        acc = next(it)
    except StopIteration:
        raise ValueError("sum_terms needs at least one summand") from None
    for t in it:
        acc = Add(acc, t)
    return acc


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:\s*/\s*\d+)?)|(?P<var>x\d+)|(?P<relu>ReLU)"
                    r"|(?P<op>[-+*()]))")


def _tokenize(text):
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    return out


class _TermParser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, k=0):
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else (None, None, -1)

    def take(self, value=None):
        tok = self.peek()
        if tok[0] is None or (value is not None and tok[1] != value):
            raise ParseError(f"expected {value or 'more input'}, got {tok[1] if tok[0] else 'end of input'!r}")
        self.i += 1
        return tok

    def parse(self):
        t = self.sum()
        if self.peek()[0] is not None:
            raise ParseError(f"trailing input at token {self.peek()[1]!r}")
        return t

    def sum(self):
        t = self.prod()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.prod()
            t = Add(t, rhs) if op == "+" else sub(t, rhs)
        return t

    def prod(self):
        t = self.unary()
        while self.peek()[1] == "*":
            self.take()
            t = Mul(t, self.unary())
        return t

    def unary(self):
        kind, val, pos = self.peek()
        if val == "-":
            nkind, nval, npos = self.peek(1)
            # "-3" glued to its digits is a negative literal; "- t" is -1*t
            if nkind == "num" and npos == pos + 1:
                self.i += 2
                return Const(-parse_rational(nval))
            self.take()
            return neg(self.unary())
        return self.atom()

    def atom(self):
        kind, val, _ = self.take()
        if kind == "num":
            return Const(parse_rational(val))
        if kind == "var":
            return Var(int(val[1:]))
        if kind == "relu":
            self.take("(")
            t = self.sum()
            self.take(")")
            return Relu(t)
        if val == "(":
            t = self.sum()
            self.take(")")
            return t
        raise ParseError(f"unexpected token {val!r}")


def parse_term(text: str) -> Term:
    """Parse the ASCII term grammar, e.g. ``"ReLU(x0 + x0*x1) + x1"``."""
    return _TermParser(text).parse()


def format_term(t: Term) -> str:
    """Print ``t`` so that :func:`parse_term` gives back the same tree."""
    return _fmt(t, 0)


def _fmt(t, level):
    # level 0: sum position, 1: right of '+', 2: right of '*'
    if isinstance(t, Const):
        return str(t.value)
    if isinstance(t, Var):
        return f"x{t.index}"
    if isinstance(t, Relu):
        return f"ReLU({_fmt(t.arg, 0)})"
    if isinstance(t, Add):
        s = f"{_fmt(t.left, 0)} + {_fmt(t.right, 1)}"
        return s if level == 0 else f"({s})"
    s = f"{_fmt(t.left, 1)}*{_fmt(t.right, 2)}"
    return s if level < 2 else f"({s})"


# ------------------------------------------------------------- semantics

def _memo(fn):
    """Run a structural recursion once per distinct node object."""
    def run(t, *extra):
        cache = {}

        def rec(u):
            key = id(u)
            if key not in cache:
                cache[key] = fn(u, rec, *extra)
            return cache[key]

        return rec(t)

    run.__name__, run.__doc__ = fn.__name__, fn.__doc__
    return run


@_memo
def _eval(t, rec, E):
    if isinstance(t, Const):
        return t.value
    if isinstance(t, Var):
        try:
            return Fraction(E[t.index])
        except KeyError:
            raise KeyError(f"evaluation map has no value for x{t.index}") from None
    if isinstance(t, Add):
        return rec(t.left) + rec(t.right)
    if isinstance(t, Mul):
        return rec(t.left) * rec(t.right)
    v = rec(t.arg)
    return v if v > 0 else Fraction(0)


def eval_term(t: Term, E: Mapping[int, Fraction]) -> Fraction:
    """Exact value of ``t`` under the evaluation map ``E`` (index -> rational)."""
    return _eval(t, E)


@_memo
def degree(t, rec):
    if isinstance(t, Const):
        return 0
    if isinstance(t, Var):
        return 1
    if isinstance(t, Add):
        return max(rec(t.left), rec(t.right))
    if isinstance(t, Mul):
        return rec(t.left) + rec(t.right)
    return rec(t.arg)


@_memo
def atomic_length(t, rec):
    """Number of constant/variable leaves."""
    if isinstance(t, (Const, Var)):
        return 1
    if isinstance(t, Relu):
        return rec(t.arg)
    return rec(t.left) + rec(t.right)


def subterms(t: Term) -> set:
    out = set()
    seen = set()
    stack = [t]
    while stack:
        s = stack.pop()
        if id(s) in seen:
            continue
        seen.add(id(s))
        out.add(s)
        if isinstance(s, (Add, Mul)):
            stack += [s.left, s.right]
        elif isinstance(s, Relu):
            stack.append(s.arg)
    return out


@_memo
def _vars(t, rec):
    if isinstance(t, Var):
        return frozenset((t.index,))
    if isinstance(t, Const):
        return frozenset()
    if isinstance(t, Relu):
        return rec(t.arg)
    return rec(t.left) | rec(t.right)


@_memo
def is_proto_neuron(t, rec):
    """Grammar check: never multiply two variable-carrying factors.

    Written against the proto-neuron grammar rather than via :func:`degree`
    so the two can be tested against each other.
    """
    if isinstance(t, (Const, Var)):
        return True
    if isinstance(t, Relu):
        return rec(t.arg)
    if isinstance(t, Add):
        return rec(t.left) and rec(t.right)
    if not _vars(t.left):
        return rec(t.right)
    if not _vars(t.right):
        return rec(t.left)
    return False


def variables(t: Term) -> set:
    return set(_vars(t))


def constants(t: Term) -> set:
    return {s.value for s in subterms(t) if isinstance(s, Const)}


def terms_equal_on_grid(t1: Term, t2: Term, grid) -> bool:
    """True iff both terms agree exactly at every evaluation map in ``grid``."""
    return all(eval_term(t1, E) == eval_term(t2, E) for E in grid)
