"""The linearized logarithmic jet complex over F_p, by generators and relations.

A degree-r element is an F_p-combination of symbols d(I; J1, ..., Jr) with
every slot J in the slot set (0 < |J| <= p^m).  The relations are

    sum_{A+B+C=J, B,C != J} Gamma_{A,B,C} d(I; J1..J_{k-1}, A+B, A+C, J_{k+2}..Jr)

for p^m < |J| <= 2 p^m.  None of them changes I, and their coefficients do
not depend on I, so all relation data is computed once per degree on slot
tuples and then reused for every I.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .combinat import InconsistencyError, Params, gamma, multi_mbinom
from .indexing import (
    DeltaSymbol,
    MultiIndex,
    add,
    canonicalize,
    decompositions,
    in_slot_set,
    leq,
    s_index,
    slot_set,
    sub,
    symbol_key,
)
from .linalg_fp import Chain, Echelon, accumulate, solve_coordinates, span_contains

Slots = Tuple[MultiIndex, ...]


# ---------------------------------------------------------------------------
# products and the two basic differentials


def eta_product(params: Params, I: Sequence[int], K: Sequence[int]) -> Tuple[int, MultiIndex]:
    """eta^{I} eta^{K} = <I+K, I> eta^{I+K}; returns (coefficient mod p, I+K)."""
    IK = add(I, K)
    return multi_mbinom(params, IK, I) % params.p, IK


def _slot_product(params: Params, J: MultiIndex, K: MultiIndex) -> Tuple[int, Optional[MultiIndex]]:
    """Product of two slot monomials, truncated at |.| > p^m."""
    JK = add(J, K)
    if sum(JK) > params.pm:
        return 0, None
    return multi_mbinom(params, JK, J) % params.p, JK


@lru_cache(maxsize=None)
def _d0_terms(params: Params, I: MultiIndex) -> Tuple[Tuple[int, MultiIndex, MultiIndex], ...]:
    """(Gamma, A+B, A+C) for A+B+C = I, B != I, with A+C a legal slot."""
    out = []
    for A, B, C in decompositions(I, True, False):
        AC = add(A, C)
        if not in_slot_set(params, AC):
            continue
        g = gamma(params, A, B, C)
        if g:
            out.append((g, add(A, B), AC))
    return tuple(out)


@lru_cache(maxsize=None)
def _split_terms(params: Params, J: MultiIndex) -> Tuple[Tuple[int, MultiIndex, MultiIndex], ...]:
    """(Gamma, A+B, A+C) for A+B+C = J, B,C != J, with both parts legal slots.

    This is d^1 of eta^{J} up to the overall sign -1; it is used both for
    the slot differential (|J| <= p^m) and for relations (|J| > p^m).
    """
    out = []
    for A, B, C in decompositions(J, True, True):
        AB, AC = add(A, B), add(A, C)
        if not (in_slot_set(params, AB) and in_slot_set(params, AC)):
            continue
        g = gamma(params, A, B, C)
        if g:
            out.append((g, AB, AC))
    return tuple(out)


def diff0(params: Params, I: Sequence[int]) -> Chain:
    """d^0(eta^{I}) = sum_{A+B+C=I, B != I} Gamma d(A+B; A+C)."""
    terms: Dict[DeltaSymbol, int] = {}
    for g, AB, AC in _d0_terms(params, tuple(I)):
        accumulate(params.p, terms, DeltaSymbol(AB, (AC,)), g)
    return Chain._trusted(params.p, 1, terms)


def diff1_slot(params: Params, J: Sequence[int]) -> Chain:
    """d^1((dlog t)^J) = - sum_{A+B+C=J, B,C != J} Gamma d(0; A+B, A+C)."""
    J = tuple(J)
    if len(J) != params.n or not in_slot_set(params, J):
        raise ValueError(f"{J} is not a legal slot exponent")
    z = (0,) * params.n
    terms: Dict[DeltaSymbol, int] = {}
    for g, AB, AC in _split_terms(params, J):
        accumulate(params.p, terms, DeltaSymbol(z, (AB, AC)), -g)
    return Chain._trusted(params.p, 2, terms)


def _differential_terms(params: Params, sym: DeltaSymbol) -> Dict[DeltaSymbol, int]:
    p = params.p
    I, slots = sym.eta, sym.slots
    terms: Dict[DeltaSymbol, int] = {}
    for g, AB, AC in _d0_terms(params, I):
        accumulate(p, terms, DeltaSymbol(AB, (AC,) + slots), g)
    for k, J in enumerate(slots, start=1):
        sign = -1 if k % 2 else 1
        head, tail = slots[: k - 1], slots[k:]
        for g, AB, AC in _split_terms(params, J):
            accumulate(p, terms, DeltaSymbol(I, head + (AB, AC) + tail), sign * g)
    return terms


@lru_cache(maxsize=200_000)
def _differential_symbol(params: Params, sym: DeltaSymbol) -> Tuple[Tuple[DeltaSymbol, int], ...]:
    return tuple(_differential_terms(params, sym).items())


def differential(params: Params, v: Chain, r: Optional[int] = None) -> Chain:
    """The Leibniz-rule differential of a degree-r chain.

    On a symbol:  d^0(eta^I) (x) slots
                + sum_k (-1)^k  sum Gamma d(I; .., A+B, A+C, ..)   (split of J_k).
    """
    if r is not None and v.degree != r:
        raise ValueError(f"chain has degree {v.degree}, expected {r}")
    p = params.p
    terms: Dict[DeltaSymbol, int] = {}
    for sym, c in v.items():
        for s2, g in _differential_symbol(params, sym):
            accumulate(p, terms, s2, c * g)
    return Chain._trusted(p, v.degree + 1, terms)


def push_coefficient(
    params: Params, K: Sequence[int], slots: Sequence[Sequence[int]], eta_target: Sequence[int]
) -> Chain:
    """Move a coefficient eta^{K} standing right of ``slots`` to the front.

    Crossing a slot J uses the coproduct of eta^{K}:
        eta^{K} -> sum_{A+B+C=K} Gamma_{A,B,C} eta^{A+B} (next position left),
    with the slot becoming (dlog t)^{J} (dlog t)^{A+C} (zero on overflow).
    At position 0 the coefficient merges into eta^{eta_target}.
    Returns the resulting chain d(eta_target + .; slots').
    """
    p = params.p
    slots = tuple(tuple(J) for J in slots)
    state: Dict[Tuple[MultiIndex, Slots], int] = {(tuple(K), slots): 1}
    for pos in range(len(slots) - 1, -1, -1):
        new: Dict[Tuple[MultiIndex, Slots], int] = {}
        for (Kc, sl), c in state.items():
            J = sl[pos]
            for A, B, C in decompositions(Kc):
                g = gamma(params, A, B, C)
                if not g:
                    continue
                mc, J2 = _slot_product(params, J, add(A, C))
                if not mc:
                    continue
                accumulate(p, new, (add(A, B), sl[:pos] + (J2,) + sl[pos + 1:]), c * g * mc)
        state = new
    terms: Dict[DeltaSymbol, int] = {}
    for (Kc, sl), c in state.items():
        e, I2 = eta_product(params, eta_target, Kc)
        if e:
            accumulate(p, terms, DeltaSymbol(I2, sl), c * e)
    return Chain._trusted(p, len(slots), terms)


# ---------------------------------------------------------------------------
# relations


@dataclass(frozen=True)
class RelationSpec:
    """One relation: d(I; before) (x) d^1(eta^{J}) (x) d(0; after), J at slot ``position``."""

    eta: MultiIndex
    position: int
    inner: MultiIndex
    before: Slots = ()
    after: Slots = ()

    @property
    def degree(self) -> int:
        return len(self.before) + len(self.after) + 2

    @property
    def type_s(self) -> int:
        """s(J1, .., J_{k-1}, J_{k+2}, .., Jr) of the surrounding slots (0 if none)."""
        rest = self.before + self.after
        return s_index(rest) if rest else 0

    def validate(self, params: Params) -> None:
        n, pm = params.n, params.pm
        if self.position != len(self.before) + 1:
            raise ValueError("position must equal len(before) + 1")
        for J in (self.eta, self.inner) + self.before + self.after:
            if len(J) != n:
                raise ValueError(f"{J} has the wrong length for n={n}")
        if not pm < sum(self.inner) <= 2 * pm:
            raise ValueError(f"inner index {self.inner} must satisfy p^m < |J| <= 2p^m")
        for J in self.before + self.after:
            if not in_slot_set(params, J):
                raise ValueError(f"surrounding slot {J} is not a legal slot exponent")


def inner_indices(params: Params) -> List[MultiIndex]:
    """All J with p^m < |J| <= 2 p^m."""
    pm = params.pm
    return [J for J in product(range(2 * pm + 1), repeat=params.n) if pm < sum(J) <= 2 * pm]


def _relation_slot_terms(params: Params, before: Slots, inner: MultiIndex, after: Slots) -> Dict[Slots, int]:
    terms: Dict[Slots, int] = {}
    for g, AB, AC in _split_terms(params, inner):
        accumulate(params.p, terms, before + (AB, AC) + after, g)
    return terms


def relation_chain(params: Params, spec: RelationSpec, r: Optional[int] = None) -> Chain:
    spec.validate(params)
    if r is not None and r != spec.degree:
        raise ValueError(f"relation has degree {spec.degree}, expected {r}")
    terms = {
        DeltaSymbol(spec.eta, sl): c
        for sl, c in _relation_slot_terms(params, spec.before, spec.inner, spec.after).items()
    }
    return Chain._trusted(params.p, spec.degree, terms)


def relation_specs(params: Params, r: int, eta: Sequence[int]) -> List[RelationSpec]:
    """Every relation spec of degree r with the given I, in deterministic order."""
    eta = tuple(eta)
    out = []
    S = slot_set(params)
    inners = inner_indices(params)
    for k in range(1, r):
        for before in product(S, repeat=k - 1):
            for inner in inners:
                for after in product(S, repeat=r - k - 1):
                    out.append(RelationSpec(eta, k, inner, before, after))
    return out


def _specs_through(params: Params, sym: DeltaSymbol) -> List[RelationSpec]:
    """Relation specs whose chain has a non-zero coefficient on ``sym``."""
    out = []
    slots = sym.slots
    pm = params.pm
    for k in range(1, len(slots)):
        Jk, Jk1 = slots[k - 1], slots[k + 0]
        lo = tuple(min(a, b) for a, b in zip(Jk, Jk1))
        for A in product(*(range(x + 1) for x in lo)):
            inner = sub(add(Jk, Jk1), A)
            if not pm < sum(inner) <= 2 * pm:
                continue
            spec = RelationSpec(sym.eta, k, inner, slots[: k - 1], slots[k + 1:])
            terms = _relation_slot_terms(params, spec.before, inner, spec.after)
            if terms.get(slots, 0):
                out.append(spec)
    return out


def relations_touching(params: Params, support: Iterable[DeltaSymbol]) -> List[Chain]:
    """Closure of the relations reachable from ``support``.

    Start from every relation containing a support symbol, add the symbols of
    those relations to the frontier, and repeat until nothing new appears.
    """
    seen_syms = set()
    frontier = sorted(set(support), key=symbol_key)
    specs: Dict[RelationSpec, Chain] = {}
    while frontier:
        nxt = set()
        for sym in frontier:
            if sym in seen_syms:
                continue
            seen_syms.add(sym)
            for spec in _specs_through(params, sym):
                if spec in specs:
                    continue
                ch = relation_chain(params, spec)
                specs[spec] = ch
                nxt.update(s for s in ch if s not in seen_syms)
        frontier = sorted(nxt, key=symbol_key)
    return [specs[s] for s in sorted(specs, key=lambda s: (s.position, s.before, s.inner, s.after))]


@lru_cache(maxsize=None)
def _relation_echelon(params: Params, r: int) -> Echelon:
    """RREF of all degree-r relations on slot tuples (I factored out)."""
    ech = Echelon(params.p)
    if r < 2:
        return ech
    S = slot_set(params)
    inners = inner_indices(params)
    for k in range(1, r):
        for before in product(S, repeat=k - 1):
            for after in product(S, repeat=r - k - 1):
                for inner in inners:
                    terms = _relation_slot_terms(params, before, inner, after)
                    if terms:
                        ech.add(terms)
    return ech


def _by_eta(v: Chain) -> Dict[MultiIndex, Dict[Slots, int]]:
    groups: Dict[MultiIndex, Dict[Slots, int]] = {}
    for sym, c in v.items():
        groups.setdefault(sym.eta, {})[sym.slots] = c
    return groups


def quotient_reduce(params: Params, v: Chain) -> Tuple[Chain, int]:
    """Reduce ``v`` modulo the relations; returns (normal form, rows used).

    The normal form is zero exactly when ``v`` is zero in the quotient.
    """
    ech = _relation_echelon(params, v.degree)
    terms: Dict[DeltaSymbol, int] = {}
    used = 0
    for I, vec in _by_eta(v).items():
        used += ech.used_rows(vec)
        for sl, c in ech.reduce(vec).items():
            terms[DeltaSymbol(I, sl)] = c
    return Chain._trusted(params.p, v.degree, terms), used


def quotient_zero(params: Params, v: Chain) -> bool:
    """Whether ``v`` vanishes in the linearized log jet complex."""
    if v.degree < 2:
        return v.is_zero()
    return quotient_reduce(params, v)[0].is_zero()


def quotient_zero_by_closure(params: Params, v: Chain) -> bool:
    """Same decision as ``quotient_zero`` via explicit relation closure."""
    if v.is_zero():
        return True
    return span_contains(v, relations_touching(params, v.support()))


# ---------------------------------------------------------------------------
# the intermediate quotient M-bar


def is_mbar_basis(params: Params, slots: Sequence[Sequence[int]]) -> bool:
    """Whether slot tuple indexes a basis symbol of M-bar."""
    if not slots:
        return True
    s = s_index(slots)
    return slots[s - 1][-1] < params.pm or s == len(slots)


def _is_mbar_relation(params: Params, before: Slots, inner: MultiIndex) -> bool:
    return all(J[-1] == 0 for J in before) and inner[-1] >= params.pm


def mbar_relation_specs(params: Params, r: int, eta: Sequence[int]) -> List[RelationSpec]:
    """The relations killed in M-bar: leading slots free of the last coordinate, j_n >= p^m."""
    return [
        spec
        for spec in relation_specs(params, r, eta)
        if _is_mbar_relation(params, spec.before, spec.inner)
    ]


@lru_cache(maxsize=None)
def _mbar_table(params: Params, r: int) -> Dict[Slots, Tuple[Tuple[Slots, int], ...]]:
    """Expansion of every non-basis slot tuple of degree r in the M-bar basis.

    Built with the same coordinate solver as ``solve_coordinates``; raises
    ``InconsistencyError`` if the basis claim fails in this degree.
    """
    all_slots = list(product(slot_set(params), repeat=r))
    basis = [sl for sl in all_slots if is_mbar_basis(params, sl)]
    bset = set(basis)
    ech = Echelon(params.p, lambda sl: (sl in bset, sl))
    S = slot_set(params)
    for k in range(1, r):
        for before in product(S, repeat=k - 1):
            for inner in inner_indices(params):
                if not _is_mbar_relation(params, before, inner):
                    continue
                for after in product(S, repeat=r - k - 1):
                    terms = _relation_slot_terms(params, before, inner, after)
                    if terms:
                        ech.add(terms)
    table = {}
    for sl in all_slots:
        if sl in bset:
            continue
        coords = ech.coordinates({sl: 1}, basis)
        if coords is None:
            raise InconsistencyError(f"slot tuple {sl} is not generated by the M-bar basis")
        table[sl] = tuple((b, c) for b, c in coords.items() if c)
    return table


def mbar_expand(params: Params, sym: DeltaSymbol) -> Chain:
    """Rewrite a canonical symbol in the M-bar basis."""
    if canonicalize(params, sym) is None:
        raise ValueError(f"{sym} is not canonical")
    if is_mbar_basis(params, sym.slots):
        return Chain.from_symbol(params.p, sym)
    table = _mbar_table(params, sym.degree)
    return Chain._trusted(
        params.p, sym.degree, {DeltaSymbol(sym.eta, b): c for b, c in table[sym.slots]}
    )


def mbar_expand_direct(params: Params, sym: DeltaSymbol) -> Chain:
    """Uncached ``mbar_expand`` through ``solve_coordinates`` on chains with this I."""
    r = sym.degree
    basis = [
        DeltaSymbol(sym.eta, sl)
        for sl in product(slot_set(params), repeat=r)
        if is_mbar_basis(params, sl)
    ]
    gens = [relation_chain(params, s) for s in mbar_relation_specs(params, r, sym.eta)]
    gens = [g for g in gens if g]
    coords = solve_coordinates(Chain.from_symbol(params.p, sym), basis, gens)
    if coords is None:
        raise InconsistencyError(f"{sym} is not generated by the M-bar basis")
    return Chain(params.p, r, coords)
