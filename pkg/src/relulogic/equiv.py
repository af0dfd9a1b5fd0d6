"""Scaling and exact finite-sample equivalence oracles.

Three relations are checked, always by exact rational comparison:

* plain: ``V(φ) = t(E)`` with ``V(pᵢ) = E(xᵢ) ∈ [0,1]``;
* (i,k): ``V(φ) = scale_k(t(E))`` with ``V(pᵢ) = scale_k(E(xᵢ))``, ``E(xᵢ) ∈ [−i,i]``;
* k: ``V′(ψ) = scale_k(V(φ))`` with ``V′ = scale_k ∘ V``.

A passing report certifies the sampled points only.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor
from typing import Optional

from .logic import Formula, eval_formula, props
from .terms import eval_term, variables

__all__ = [
    "scale", "unscale", "EquivReport", "make_grid", "random_assignments",
    "check_plain_equivalence", "check_ik_equivalence", "check_k_equivalence",
    "DEFAULT_CAP", "plain_grid_values", "ik_grid_values",
]

DEFAULT_CAP = 100_000


def scale(k, x) -> Fraction:
    """scale_k(x) = (k + x) / (2k)."""
    k = Fraction(k)
    if k <= 0:
        raise ValueError("scale needs k > 0")
    return (k + Fraction(x)) / (2 * k)


def unscale(k, y) -> Fraction:
    """Inverse of :func:`scale`: 2k·y − k."""
    k = Fraction(k)
    if k <= 0:
        raise ValueError("unscale needs k > 0")
    return 2 * k * Fraction(y) - k


@dataclass(frozen=True)
class EquivReport:
    mode: str  # "plain", "ik" or "k"
    points_checked: int
    first_mismatch: Optional[tuple] = None  # (assignment, lhs, rhs)

    @property
    def passed(self) -> bool:
        return self.first_mismatch is None

    def to_json(self, prefix: str = "x") -> dict:
        w = None
        if self.first_mismatch is not None:
            a, lhs, rhs = self.first_mismatch
            w = {"assignment": {f"{prefix}{v}": str(r) for v, r in sorted(a.items())},
                 "lhs": str(lhs), "rhs": str(rhs)}
        return {"mode": self.mode, "points": self.points_checked, "passed": self.passed,
                "witness": w}


def plain_grid_values():
    return [Fraction(n, 4) for n in range(5)]


def ik_grid_values(i):
    i = Fraction(i)
    return [-i, -i / 2, Fraction(0), i / 2, i]


def make_grid(vars, values, cap: int = DEFAULT_CAP) -> list:
    """Cartesian grid over ``vars`` (sorted); refuses more than ``cap`` points."""
    vs = sorted(set(vars))
    values = [Fraction(v) for v in values]
    n = len(values) ** len(vs)
    if n > cap:
        raise ValueError(f"grid of {n} points exceeds the cap of {cap}")
    return [dict(zip(vs, pt)) for pt in itertools.product(values, repeat=len(vs))]


def random_assignments(vars, n: int, seed: int = 0, lo=0, hi=1, max_den: int = 32) -> list:
    """``n`` seeded random assignments with values in [lo, hi] and denominators ≤ max_den."""
    rng = random.Random(seed)
    lo, hi = Fraction(lo), Fraction(hi)
    vs = sorted(set(vars))
    out = []
    for _ in range(n):
        pt = {}
        for v in vs:
            while True:
                d = rng.randint(1, max_den)
                a, b = ceil(lo * d), floor(hi * d)
                if a <= b:
                    break
            pt[v] = Fraction(rng.randint(a, b), d)
        out.append(pt)
    return out


def _vars_of(*objs):
    out = set()
    for o in objs:
        out |= props(o) if isinstance(o, Formula) else variables(o)
    return out


def _run(mode, points, lhs_fn, rhs_fn):
    n = 0
    for pt in points:
        n += 1
        lhs, rhs = lhs_fn(pt), rhs_fn(pt)
        if lhs != rhs:
            return EquivReport(mode, n, (dict(pt), lhs, rhs))
    return EquivReport(mode, n)


def check_plain_equivalence(phi, t, samples=None, cap: int = DEFAULT_CAP) -> EquivReport:
    """V(φ) = t(E) on [0,1]-valued points (default grid {0,1/4,1/2,3/4,1})."""
    if samples is None:
        samples = make_grid(_vars_of(phi, t), plain_grid_values(), cap)
    for pt in samples:
        if any(not 0 <= v <= 1 for v in pt.values()):
            raise ValueError("plain equivalence samples must lie in [0,1]")
    return _run("plain", samples, lambda E: eval_formula(phi, E), lambda E: eval_term(t, E))


def check_ik_equivalence(phi, t, i, k, samples=None, cap: int = DEFAULT_CAP) -> EquivReport:
    """V(φ) = scale_k(t(E)) with V = scale_k ∘ E on [−i,i]-valued points."""
    i, k = Fraction(i), Fraction(k)
    if not 0 < i <= k:
        raise ValueError(f"(i,k)-equivalence needs 0 < i <= k, got i={i}, k={k}")
    if samples is None:
        samples = make_grid(_vars_of(phi, t), ik_grid_values(i), cap)
    for pt in samples:
        if any(abs(v) > i for v in pt.values()):
            raise ValueError(f"(i,k) samples must lie in [-{i}, {i}]")
    return _run("ik", samples,
                lambda E: eval_formula(phi, {v: scale(k, x) for v, x in E.items()}),
                lambda E: scale(k, eval_term(t, E)))


def check_k_equivalence(psi, phi, k, samples=None, cap: int = DEFAULT_CAP) -> EquivReport:
    """V′(ψ) = scale_k(V(φ)) with V′ = scale_k ∘ V on [0,1]-valued points."""
    k = Fraction(k)
    if k <= 0:
        raise ValueError("k must be positive")
    if samples is None:
        samples = make_grid(_vars_of(psi, phi), plain_grid_values(), cap)
    for pt in samples:
        if any(not 0 <= v <= 1 for v in pt.values()):
            raise ValueError("k-equivalence samples must lie in [0,1]")
    return _run("k", samples,
                lambda V: eval_formula(psi, {p: scale(k, x) for p, x in V.items()}),
                lambda V: scale(k, eval_formula(phi, V)))
