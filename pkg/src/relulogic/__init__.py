"""Exact translations between ReLU-polynomials/networks over ℚ and fuzzy logics."""

from .terms import (Add, Const, Mul, ParseError, Relu, Term, Var, atomic_length, degree,
                    eval_term, format_term, is_proto_neuron, parse_term, subterms,
                    terms_equal_on_grid)
from .logic import (Formula, FragmentInfo, LogicId, biimpl, classify, derived, eval_formula,
                    expand, half, impl, impp, neg, ominus, oplus, otimes, prod, prop,
                    rational_constant, truth_const, underline, vee, wedge, zero)
from .syntax import format_formula, parse_formula
from .connectives import iter_scaled_sum, iter_strong_sum, scaled_add, scaled_mul
from .networks import (FragmentError, InflationResult, Layer, NeuralNetwork, formula_to_neuron,
                       increase_depth, inflate_to_integers, merge_networks, network_from_json,
                       network_to_json, network_to_terms)
from .equiv import (EquivReport, check_ik_equivalence, check_k_equivalence,
                    check_plain_equivalence, make_grid, random_assignments, scale, unscale)
from .translate import (LukProtoNeuron, ScaledTranslation, compute_K_term, formula_to_luk_proto,
                        formula_to_term, luk_proto_to_formula, network_to_logic,
                        proto_neuron_to_logic, term_to_formula, translate_terms)

__version__ = "0.1.0"
