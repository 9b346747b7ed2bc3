"""Homotopy operators contracting the log jet complex onto the projector pi_n.

``h`` lowers degree by one.  On degree 1 it is given by an explicit case
list; in higher degree it is defined on the M-bar basis by splitting off the
first slot that involves the last coordinate.  ``homotopy_check`` verifies
h d + d h = id - pi_n on a single generator in the quotient.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Optional, Sequence, Tuple

from .combinat import Params, falling_ratio, sigma
from .indexing import DeltaSymbol, MultiIndex, canonicalize, s_index, unit
from .jet_complex import differential, is_mbar_basis, mbar_expand, push_coefficient, quotient_reduce
from .linalg_fp import Chain, accumulate

# exponent k of eta_n^{k} -> coefficient
EtaPolynomial = Dict[int, int]


def h1_poly(params: Params, i_n: int, J: Sequence[int]) -> EtaPolynomial:
    """The eta_n-part of h^1(d(i_n 1_n; J))."""
    pm, p = params.pm, params.p
    if i_n % pm:
        return {}
    q = i_n // pm
    j_n = J[-1]
    if any(J[:-1]) or j_n == 0:
        return {}
    if j_n < pm:
        return {i_n + j_n: 1}
    # j_n == p^m: alternating sum up to sigma(q) - 1
    out: EtaPolynomial = {}
    for u in range(q, sigma(params, q)):
        c = (-1) ** (u - q) * falling_ratio(u, q)
        accumulate(p, out, pm * (u + 1), c)
    return out


def h1(params: Params, sym: DeltaSymbol) -> Chain:
    """h^1 on a canonical degree-1 symbol."""
    if sym.degree != 1 or canonicalize(params, sym) is None:
        raise ValueError(f"h1 needs a canonical degree-1 symbol, got {sym}")
    I = sym.eta
    poly = h1_poly(params, I[-1], sym.slots[0])
    base = I[:-1]
    return Chain(params.p, 0, {DeltaSymbol(base + (k,), ()): c for k, c in poly.items()})


def _h_basis(params: Params, sym: DeltaSymbol) -> Dict[DeltaSymbol, int]:
    p, n = params.p, params.n
    I, slots = sym.eta, sym.slots
    s = s_index(slots)
    poly = h1_poly(params, I[-1], slots[s - 1])
    if not poly:
        return {}
    sign = 1 if s % 2 else -1
    head, tail = slots[: s - 1], slots[s:]
    target = I[:-1] + (0,)
    e_n = unit(n, n)
    out: Dict[DeltaSymbol, int] = {}
    for k, c in poly.items():
        K = tuple(k * x for x in e_n)
        for hs, hc in push_coefficient(params, K, head, target).items():
            accumulate(p, out, DeltaSymbol(hs.eta, hs.slots + tail), sign * c * hc)
    return out


@lru_cache(maxsize=200_000)
def _h_symbol(params: Params, sym: DeltaSymbol) -> Tuple[Tuple[DeltaSymbol, int], ...]:
    if sym.degree == 1:
        return tuple(h1(params, sym).items())
    if is_mbar_basis(params, sym.slots):
        return tuple(_h_basis(params, sym).items())
    out: Dict[DeltaSymbol, int] = {}
    for b, c in mbar_expand(params, sym).items():
        for t, tc in _h_basis(params, b).items():
            accumulate(params.p, out, t, c * tc)
    return tuple(out.items())


def h(params: Params, v: Chain, r: Optional[int] = None) -> Chain:
    """The homotopy operator h^r on a degree-r chain (r >= 1)."""
    if r is not None and v.degree != r:
        raise ValueError(f"chain has degree {v.degree}, expected {r}")
    if v.degree < 1:
        raise ValueError("h is only defined in degree >= 1")
    p = params.p
    out: Dict[DeltaSymbol, int] = {}
    for sym, c in v.items():
        for t, tc in _h_symbol(params, sym):
            accumulate(p, out, t, c * tc)
    return Chain._trusted(p, v.degree - 1, out)


def pi(params: Params, i: int, v: Chain) -> Chain:
    """Projector killing every symbol with content in coordinate i (1-based)."""
    if not 1 <= i <= params.n:
        raise ValueError(f"coordinate {i} out of range 1..{params.n}")
    k = i - 1
    keep = {
        sym: c
        for sym, c in v.items()
        if sym.eta[k] == 0 and all(J[k] == 0 for J in sym.slots)
    }
    return Chain._trusted(v.p, v.degree, keep)


def _check_perm(n: int, perm: Sequence[int]) -> Tuple[int, ...]:
    perm = tuple(perm)
    if sorted(perm) != list(range(1, n + 1)):
        raise ValueError(f"{perm} is not a permutation of 1..{n}")
    return perm


def permute_index(perm: Sequence[int], I: MultiIndex) -> MultiIndex:
    """Send the coordinate at position k to position perm[k] (1-based)."""
    out = [0] * len(I)
    for k, x in enumerate(I):
        out[perm[k] - 1] = x
    return tuple(out)


def permute(params: Params, perm: Sequence[int], v: Chain) -> Chain:
    perm = _check_perm(params.n, perm)
    terms = {
        DeltaSymbol(permute_index(perm, s.eta), tuple(permute_index(perm, J) for J in s.slots)): c
        for s, c in v.items()
    }
    return Chain._trusted(v.p, v.degree, terms)


def inverse_perm(perm: Sequence[int]) -> Tuple[int, ...]:
    inv = [0] * len(perm)
    for k, x in enumerate(perm):
        inv[x - 1] = k + 1
    return tuple(inv)


def swap_perm(n: int, i: int) -> Tuple[int, ...]:
    """Transposition of coordinates i and n."""
    perm = list(range(1, n + 1))
    perm[i - 1], perm[n - 1] = perm[n - 1], perm[i - 1]
    return tuple(perm)


def h_coordinate(params: Params, i: int, v: Chain) -> Chain:
    """h conjugated so that it contracts coordinate i instead of n."""
    perm = swap_perm(params.n, i)
    return permute(params, inverse_perm(perm), h(params, permute(params, perm, v)))


@dataclass
class CheckResult:
    symbol: DeltaSymbol
    coordinate: int
    computed: Chain
    expected: Chain
    residual: Chain
    passed: bool
    relations_used: int
    elapsed: float


def homotopy_check(
    params: Params, sym: DeltaSymbol, r: Optional[int] = None, coordinate: Optional[int] = None
) -> CheckResult:
    """Check (h d + d h)(sym) = sym, or 0 when sym has no content in the coordinate.

    In degree 0 only h d contributes.  The comparison is made in the
    quotient, so ``residual`` is the reduced normal form of computed - expected.
    """
    t0 = time.perf_counter()
    if r is not None and sym.degree != r:
        raise ValueError(f"symbol has degree {sym.degree}, expected {r}")
    if canonicalize(params, sym) is None:
        raise ValueError(f"{sym} is not canonical")
    i = params.n if coordinate is None else coordinate
    p = params.p
    x = Chain.from_symbol(p, sym)
    if i == params.n:
        hop = lambda c: h(params, c)
    else:
        hop = lambda c: h_coordinate(params, i, c)
    w = hop(differential(params, x))
    if sym.degree >= 1:
        w = w + differential(params, hop(x))
    k = i - 1
    untouched = sym.eta[k] == 0 and all(J[k] == 0 for J in sym.slots)
    e = Chain.zero(p, sym.degree) if untouched else x
    residual, used = quotient_reduce(params, w - e)
    return CheckResult(
        symbol=sym,
        coordinate=i,
        computed=w,
        expected=e,
        residual=residual,
        passed=residual.is_zero(),
        relations_used=used,
        elapsed=time.perf_counter() - t0,
    )


def poincare_contract(params: Params, v: Chain) -> Chain:
    """Apply v <- v - h_i d v for i = n, ..., 1 to a degree-0 chain.

    Each stage equals pi_i, so the result is the constant part of v.
    """
    if v.degree != 0:
        raise ValueError("poincare_contract works on degree-0 chains")
    for i in range(params.n, 0, -1):
        v = v - h_coordinate(params, i, differential(params, v))
    return v
