"""Scaled-arithmetic connectives: ⊙ₙ, ⊕′, ⊙′ₙ and ⊙ᵏ.

Under the encoding x ↦ scale_k(x) = (k + x)/(2k) these connectives realise
addition, multiplication by a natural number and multiplication of two
scaled values.  The only constants they need are 1/4 and 1/(2k), which are
truth constants in RPL-style logics and underline constructions in ŁΠ½.
"""

from fractions import Fraction

from .logic import (LogicId, Formula, iter_scaled_node, iter_strong_node, oplus,
                    ominus, prod, quarter_for, rational_constant)

__all__ = ["iter_strong_sum", "scaled_add", "iter_scaled_sum", "scaled_mul"]


def iter_strong_sum(n: int, phi: Formula) -> Formula:
    """⊙ₙ φ, valued min{1, n·V(φ)}."""
    return iter_strong_node(n, phi)


def scaled_add(phi: Formula, psi: Formula, logic: LogicId = LogicId.RPL) -> Formula:
    """φ ⊕′ ψ = (φ ⊖ 1/4) ⊕ (ψ ⊖ 1/4)."""
    q = quarter_for(logic)
    return oplus(ominus(phi, q), ominus(psi, q))


def iter_scaled_sum(n: int, phi: Formula, logic: LogicId = LogicId.RPL) -> Formula:
    """⊙′ₙ φ; scales the encoded value by n when |n·ℓ| stays within k/2."""
    if n == 1:
        return phi
    return iter_scaled_node(n, phi, quarter_for(logic))


def scaled_mul(k: int, phi: Formula, psi: Formula, logic: LogicId = LogicId.RPL) -> Formula:
    """φ ⊙ᵏ ψ = ⊙ₖ((⊙₂(φ ⊙ ψ) ⊕ c) ⊖ (φ ⊕′ ψ)) with c = 1/(2k)."""
    if isinstance(k, Fraction):
        if k.denominator != 1:
            raise ValueError(f"scaled multiplication needs an integer k, got {k}")
        k = k.numerator
    if not isinstance(k, int) or k < 8:
        raise ValueError(f"scaled multiplication needs an integer k >= 8, got {k}")
    c = rational_constant(Fraction(1, 2 * k), logic)
    inner = ominus(oplus(iter_strong_node(2, prod(phi, psi)), c), scaled_add(phi, psi, logic))
    return iter_strong_node(k, inner)
