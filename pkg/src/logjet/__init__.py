"""Exact computations in the level-m logarithmic jet complex over F_p."""

__version__ = "0.1.0"

from .combinat import (
    InconsistencyError,
    Params,
    binom,
    digit_sum,
    gamma,
    mbinom,
    mod_p,
    multi_binom,
    multi_mbinom,
    multi_qbinom,
    qbinom,
    sigma,
)
from .indexing import DeltaSymbol, canonicalize, delta, parse_symbol, render_symbol
from .linalg_fp import Chain, solve_coordinates, span_contains
from .jet_complex import (
    RelationSpec,
    diff0,
    diff1_slot,
    differential,
    eta_product,
    mbar_expand,
    push_coefficient,
    quotient_zero,
    relation_chain,
    relations_touching,
)
from .homotopy import h, h1, homotopy_check, permute, pi, poincare_contract
