"""ASCII formula syntax: parser and (sugar-aware) pretty printer.

Grammar, loosest binding first::

    imp   := bin (('->L' | '->P' | '<->L') imp)?          right associative
    bin   := mul (('(x)' | '(+)' | '(-)' | '(+)~' | '(+)_' | '/\\' | '\\/') mul)*
    mul   := unary (('(.)' | '(.)^K' | '(.)_K') unary)*
    unary := '~L' unary | 'SSUM[' N '](' imp ')' | 'SCSUM[' N '](' imp ')'
           | 'SCSUM_[' N '](' imp ')' | atom
    atom  := 'p' N | RATIONAL | 'half' | '(' imp ')'

``(+)~``, ``(.)^K`` and ``SCSUM`` use the truth constant 1/4 (RPL flavour);
``(+)_``, ``(.)_K`` and ``SCSUM_`` use the ŁΠ½ underline construction.
"""

import re
from fractions import Fraction

from .connectives import scaled_add, scaled_mul
from .logic import (Formula, LogicId, biimpl, half, impl, impp, iter_scaled_node,
                    iter_strong_node, neg, ominus, oplus, otimes, postorder, prod,
                    prop, quarter_for, rational_constant, truth_const, vee, wedge)
from .terms import ParseError, parse_rational

__all__ = ["parse_formula", "format_formula"]

_TOK = re.compile(r"""\s*(?:
    (?P<op><->L|->L|->P|\(\.\)\^\d+|\(\.\)_\d+|\(\.\)|\(\+\)~|\(\+\)_|\(\+\)|\(x\)|\(-\)
        |~L|/\\|\\/)
  | (?P<it>SCSUM_|SCSUM|SSUM)
  | (?P<half>half)
  | (?P<prop>p\d+)
  | (?P<num>\d+(?:\s*/\s*\d+)?)
  | (?P<punct>[()\[\]])
)""", re.VERBOSE)

_IMP = {"->L", "->P", "<->L"}
_BIN = {"(x)", "(+)", "(-)", "(+)~", "(+)_", "/\\", "\\/"}
_RPL, _LPI = LogicId.RPL, LogicId.LPiHalf


def _tokens(text):
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOK.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        out.append((m.lastgroup, m.group(m.lastgroup)))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text):
        self.toks = _tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, val=None):
        tok = self.peek()
        if tok[0] is None or (val is not None and tok[1] != val):
            raise ParseError(f"expected {val or 'more input'}, got {tok[1] if tok[0] else 'end of input'!r}")
        self.i += 1
        return tok

    def parse(self):
        f = self.imp()
        if self.peek()[0] is not None:
            raise ParseError(f"trailing input at {self.peek()[1]!r}")
        return f

    def imp(self):
        f = self.bin()
        op = self.peek()[1]
        if op in _IMP:
            self.take()
            g = self.imp()
            f = {"->L": impl, "->P": impp, "<->L": biimpl}[op](f, g)
        return f

    def bin(self):
        f = self.mul()
        while self.peek()[1] in _BIN:
            op = self.take()[1]
            g = self.mul()
            if op == "(x)":
                f = otimes(f, g)
            elif op == "(+)":
                f = oplus(f, g)
            elif op == "(-)":
                f = ominus(f, g)
            elif op == "(+)~":
                f = scaled_add(f, g, _RPL)
            elif op == "(+)_":
                f = scaled_add(f, g, _LPI)
            elif op == "/\\":
                f = wedge(f, g)
            else:
                f = vee(f, g)
        return f

    def mul(self):
        f = self.unary()
        while True:
            op = self.peek()[1] or ""
            if op == "(.)":
                self.take()
                f = prod(f, self.unary())
            elif op.startswith("(.)^") or op.startswith("(.)_"):
                self.take()
                try:
                    f = scaled_mul(int(op[4:]), f, self.unary(), _RPL if op[3] == "^" else _LPI)
                except ValueError as e:
                    raise ParseError(str(e)) from None
            else:
                return f

    def unary(self):
        kind, val = self.peek()
        if val == "~L":
            self.take()
            return neg(self.unary())
        if kind == "it":
            self.take()
            self.take("[")
            nk, nv = self.take()
            if nk != "num" or "/" in nv:
                raise ParseError(f"iteration count must be a natural number, got {nv!r}")
            self.take("]")
            self.take("(")
            body = self.imp()
            self.take(")")
            n = int(nv)
            if val == "SSUM":
                return iter_strong_node(n, body)
            return iter_scaled_node(n, body, quarter_for(_RPL if val == "SCSUM" else _LPI))
        return self.atom()

    def atom(self):
        kind, val = self.take()
        if kind == "prop":
            return prop(int(val[1:]))
        if kind == "half":
            return half()
        if kind == "num":
            r = parse_rational(val)
            if not 0 <= r <= 1:
                raise ParseError(f"truth constant {r} outside [0,1]")
            return truth_const(r)
        if val == "(":
            f = self.imp()
            self.take(")")
            return f
        raise ParseError(f"unexpected token {val!r}")


def parse_formula(text: str) -> Formula:
    """Parse ASCII formula syntax, e.g. ``"1/3 ->L (p0 (.) 1/2)"``."""
    return _Parser(text).parse()


# ---------------------------------------------------------------- printing

def _m_neg(f):
    if f.kind == "impl" and f.args[1].kind == "zero":
        return f.args[0]
    return None


def _m_otimes(f):
    a = _m_neg(f)
    if a is None or a.kind != "impl":
        return None
    b = _m_neg(a.args[1])
    return None if b is None else (a.args[0], b)


def _m_ominus(f):
    m = _m_otimes(f)
    if m is None:
        return None
    b = _m_neg(m[1])
    return None if b is None else (m[0], b)


def _m_oplus(f):
    if f.kind != "impl" or f.args[1].kind == "zero":
        return None
    a = _m_neg(f.args[0])
    return None if a is None else (a, f.args[1])


def _m_scaled_add(f):
    m = _m_oplus(f)
    if m is None:
        return None
    l, r = _m_ominus(m[0]), _m_ominus(m[1])
    if l is None or r is None or l[1] is not r[1]:
        return None
    for lg, op in ((_RPL, "(+)~"), (_LPI, "(+)_")):
        try:
            if l[1] is quarter_for(lg):
                return l[0], r[0], op
        except ValueError:
            pass
    return None


def _m_scaled_mul(f):
    k = f.value
    if k < 8:
        return None
    m = _m_ominus(f.args[0])
    if m is None:
        return None
    s = _m_oplus(m[0])
    if s is None or s[0].kind != "ssum" or s[0].value != 2 or s[0].args[0].kind != "prod":
        return None
    a, b = s[0].args[0].args
    for lg, op in ((_RPL, f"(.)^{k}"), (_LPI, f"(.)_{k}")):
        if s[1] is rational_constant(Fraction(1, 2 * k), lg) and scaled_mul(k, a, b, lg) is f:
            return a, b, op
    return None


def format_formula(phi: Formula, sugar: bool = True) -> str:
    """Fully parenthesised text of ``phi`` (outermost parentheses dropped).

    With ``sugar`` the derived connectives and scaled connectives are shown
    by name; the text always parses back to the identical node.
    """
    txt = {}

    def bin_(a, op, b):
        return f"({txt[id(a)]} {op} {txt[id(b)]})"

    for node in postorder(phi):
        k = node.kind
        if k == "zero":
            s = "0"
        elif k == "half":
            s = "1/2"
        elif k == "const":
            s = str(node.value)
        elif k == "prop":
            s = f"p{node.value}"
        elif k == "ssum":
            m = _m_scaled_mul(node) if sugar else None
            if m:
                s = bin_(m[0], m[2], m[1])
            else:
                s = f"SSUM[{node.value}]({_top(txt[id(node.args[0])])})"
        elif k == "scsum":
            q = node.args[1]
            if q is quarter_for(_RPL):
                name = "SCSUM"
            elif q is quarter_for(_LPI):
                name = "SCSUM_"
            else:
                raise ValueError("scaled sum with a non-standard 1/4 constant has no syntax")
            s = f"{name}[{node.value}]({_top(txt[id(node.args[0])])})"
        elif k == "prod":
            s = bin_(node.args[0], "(.)", node.args[1])
        elif k == "impp":
            s = bin_(node.args[0], "->P", node.args[1])
        else:
            s = None
            if sugar:
                for match, op in ((_m_scaled_add, None), (_m_ominus, "(-)"),
                                  (_m_otimes, "(x)")):
                    m = match(node)
                    if m is not None:
                        s = bin_(m[0], op or m[2], m[1])
                        break
                if s is None:
                    a = _m_neg(node)
                    if a is not None:
                        s = f"~L {txt[id(a)]}"
                    else:
                        m = _m_oplus(node)
                        if m is not None:
                            s = bin_(m[0], "(+)", m[1])
            if s is None:
                s = bin_(node.args[0], "->L", node.args[1])
        txt[id(node)] = s
    return _top(txt[id(phi)])


def _top(s):
    # drop one pair of outer parentheses if they enclose the whole string
    if s.startswith("(") and s.endswith(")"):
        depth = 0
        for i, ch in enumerate(s):
            depth += ch == "("
            depth -= ch == ")"
            if depth == 0 and i < len(s) - 1:
                return s
        return s[1:-1]
    return s
