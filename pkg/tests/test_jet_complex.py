import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from logjet.combinat import Params
from logjet.indexing import DeltaSymbol, add, canonical_symbols, delta, in_slot_set, slot_set
from logjet.jet_complex import (
    RelationSpec,
    diff0,
    diff1_slot,
    differential,
    eta_product,
    inner_indices,
    is_mbar_basis,
    mbar_expand,
    mbar_expand_direct,
    mbar_relation_specs,
    push_coefficient,
    quotient_reduce,
    quotient_zero,
    quotient_zero_by_closure,
    relation_chain,
    relation_specs,
    relations_touching,
)
from logjet.linalg_fp import Chain, span_contains

from _oracles import multi_coproduct_coefficient, triples

SMALL = [Params(2, 1), Params(3, 1), Params(2, 1, 2), Params(3, 1, 2)]


def oracle_diff0(P, I):
    out = {}
    for A, B, C in triples(I):
        if B == I:
            continue
        AC = add(A, C)
        if not in_slot_set(P, AC):
            continue
        s = DeltaSymbol(add(A, B), (AC,))
        out[s] = (out.get(s, 0) + multi_coproduct_coefficient(P.p, P.pm, A, B, C)) % P.p
    return Chain(P.p, 1, out)


def random_chain(P, degree, max_weight, rng, size=4):
    syms = list(canonical_symbols(P, degree, max_weight))
    return Chain(P.p, degree, {rng.choice(syms): rng.randrange(1, P.p) for _ in range(size)})


# --- differentials ---------------------------------------------------------


def test_diff0_frozen_p2():
    P = Params(2, 1)
    assert diff0(P, (1,)) == Chain(2, 1, {delta((1,), (1,)): 1, delta((0,), (1,)): 1})
    assert diff0(P, (2,)) == Chain(2, 1, {delta((2,), (2,)): 1, delta((0,), (2,)): 1})
    expected = {delta((2,), (1,)): 1, delta((1,), (2,)): 1, delta((3,), (1,)): 1, delta((3,), (2,)): 1}
    assert diff0(P, (3,)) == Chain(2, 1, expected)


def test_diff0_of_constant_is_zero():
    for P in SMALL:
        assert diff0(P, (0,) * P.n).is_zero()


@pytest.mark.parametrize("P", SMALL + [Params(2, 2), Params(5, 1)], ids=str)
def test_diff0_against_coproduct_oracle(P):
    for I in product(range(2 * P.pm + 2), repeat=P.n):
        if sum(I) <= 3 * P.pm:
            assert diff0(P, I) == oracle_diff0(P, I), I


def test_diff1_slot_examples():
    P = Params(3, 1)
    assert diff1_slot(P, (1,)) == Chain(3, 2, {delta((0,), (1,), (1,)): 2})
    with pytest.raises(ValueError):
        diff1_slot(P, (4,))
    with pytest.raises(ValueError):
        diff1_slot(P, (0,))


def test_differential_on_degree_zero_is_diff0():
    P = Params(3, 1, 2)
    for I in [(0, 0), (1, 2), (3, 0), (2, 4)]:
        assert differential(P, Chain.from_symbol(3, delta(I))) == diff0(P, I)


def test_differential_linear():
    rng = random.Random(1)
    for P in SMALL:
        a, b = random_chain(P, 1, 3, rng), random_chain(P, 1, 3, rng)
        assert differential(P, a + b) == differential(P, a) + differential(P, b)
        assert differential(P, 2 * a) == 2 * differential(P, a)


def test_differential_degree_guard():
    with pytest.raises(ValueError):
        differential(Params(2, 1), Chain.zero(2, 1), r=2)


@pytest.mark.parametrize("P", SMALL, ids=str)
def test_dd_zero_in_quotient(P):
    for I in product(range(2 * P.pm + 1), repeat=P.n):
        x = Chain.from_symbol(P.p, DeltaSymbol(I, ()))
        assert quotient_zero(P, differential(P, differential(P, x)))
    for sym in canonical_symbols(P, 1, P.pm):
        x = Chain.from_symbol(P.p, sym)
        assert quotient_zero(P, differential(P, differential(P, x))), sym


def test_eta_product():
    P = Params(2, 1)
    # eta^{1} eta^{1} = <2,1> eta^{2} = 0 mod 2? <2,1> = 1!/(0!0!) = 1
    assert eta_product(P, (1,), (1,)) == (1, (2,))
    assert eta_product(P, (2,), (2,)) == (0, (4,))  # <4,2> = 2!/(1!1!) = 2


# --- push ------------------------------------------------------------------


def test_push_coefficient_frozen():
    P = Params(2, 1)
    got = push_coefficient(P, (3,), ((1,),), (0,))
    expected = Chain(2, 1, {delta((3,), (1,)): 1, delta((2,), (2,)): 1, delta((3,), (2,)): 1})
    assert got == expected


def test_push_across_nothing_is_eta_product():
    P = Params(3, 1)
    got = push_coefficient(P, (2,), (), (4,))
    c, I = eta_product(P, (4,), (2,))
    assert got == Chain(3, 0, {DeltaSymbol(I, ()): c})


def test_push_of_zero_exponent_is_identity():
    P = Params(2, 1, 2)
    slots = ((1, 0), (0, 2))
    assert push_coefficient(P, (0, 0), slots, (1, 1)) == Chain.from_symbol(2, DeltaSymbol((1, 1), slots))


# --- relations -------------------------------------------------------------


def test_relation_frozen_p3():
    P = Params(3, 1)
    got = relation_chain(P, RelationSpec((0,), 1, (4,)))
    assert got == Chain(3, 2, {delta((0,), (1,), (3,)): 1, delta((0,), (3,), (1,)): 1})


def test_relation_spec_validation():
    P = Params(2, 1)
    with pytest.raises(ValueError):
        relation_chain(P, RelationSpec((0,), 1, (2,)))  # |J| not > p^m
    with pytest.raises(ValueError):
        relation_chain(P, RelationSpec((0,), 1, (5,)))  # |J| > 2 p^m
    with pytest.raises(ValueError):
        relation_chain(P, RelationSpec((0,), 2, (3,)))  # position / before mismatch
    with pytest.raises(ValueError):
        relation_chain(P, RelationSpec((0,), 1, (3,), after=((3,),)))
    with pytest.raises(ValueError):
        relation_chain(P, RelationSpec((0,), 1, (3,)), r=3)


def test_relation_type_s():
    s = RelationSpec((0, 0), 2, (2, 1), before=((1, 0),), after=((0, 1),))
    assert s.degree == 4 and s.type_s == 2
    assert RelationSpec((0,), 1, (3,)).type_s == 0


def test_inner_indices():
    assert inner_indices(Params(2, 1)) == [(3,), (4,)]
    assert len(inner_indices(Params(2, 1, 2))) == 4 + 5


@pytest.mark.parametrize("P", SMALL, ids=str)
def test_relations_are_zero(P):
    for r in (2, 3):
        for spec in relation_specs(P, r, (1,) * P.n)[:200]:
            assert quotient_zero(P, relation_chain(P, spec))


def test_slot_swap_consequence():
    # relation with |J| = p^m + 1 swaps a unit slot past a full one
    for P in [Params(2, 1), Params(3, 1), Params(5, 1), Params(2, 2)]:
        for I in [(0,), (1,), (P.pm,)]:
            v = Chain(P.p, 2, {delta(I, (1,), (P.pm,)): 1, delta(I, (P.pm,), (1,)): 1})
            assert quotient_zero(P, v)
            assert not quotient_zero(P, Chain.from_symbol(P.p, delta(I, (1,), (P.pm,))))


def test_relations_touching_contains_source():
    P = Params(3, 1)
    rel = relation_chain(P, RelationSpec((0,), 1, (4,)))
    touching = relations_touching(P, [delta((0,), (1,), (3,))])
    assert rel in touching
    assert span_contains(rel, touching)
    # every symbol reached is closed under further touching
    reached = set().union(*(c.support() for c in touching))
    assert len(relations_touching(P, reached)) == len(touching)


def test_relations_touching_empty():
    assert relations_touching(Params(2, 1), []) == []
    assert relations_touching(Params(2, 1), [delta((0,), (1,))]) == []


@pytest.mark.parametrize("P", [Params(2, 1), Params(3, 1), Params(2, 1, 2)], ids=str)
def test_quotient_zero_matches_closure(P):
    rng = random.Random(7)
    rels = [relation_chain(P, s) for s in relation_specs(P, 2, (0,) * P.n)]
    rels = [r for r in rels if r]
    for trial in range(40):
        v = random_chain(P, 2, 1, rng, size=3)
        if trial % 2:
            # force some members of the relation span
            v = Chain.zero(P.p, 2)
            for rel in rng.sample(rels, min(3, len(rels))):
                v = v + rng.randrange(1, P.p) * rel
        assert quotient_zero(P, v) == quotient_zero_by_closure(P, v)


def test_quotient_low_degree_is_exact():
    P = Params(2, 1)
    assert not quotient_zero(P, Chain.from_symbol(2, delta((1,), (1,))))
    assert quotient_zero(P, Chain.zero(2, 1))


def test_quotient_reduce_idempotent():
    P = Params(3, 1, 2)
    rng = random.Random(3)
    for _ in range(20):
        v = random_chain(P, 2, 2, rng)
        nf, _ = quotient_reduce(P, v)
        assert quotient_reduce(P, nf)[0] == nf
        assert quotient_zero(P, v - nf)


# --- M-bar -----------------------------------------------------------------


def test_mbar_basis_predicate():
    P = Params(2, 1)
    assert is_mbar_basis(P, ((1,), (2,)))
    assert not is_mbar_basis(P, ((2,), (2,)))  # s = 1 < r with j = p^m
    assert is_mbar_basis(P, ((2,),))  # s = r
    assert is_mbar_basis(Params(2, 1, 2), ((1, 0), (0, 2)))  # s = r
    assert not is_mbar_basis(P, ((2,), (1,)))
    assert is_mbar_basis(P, ())


def test_mbar_frozen_p2():
    P = Params(2, 1)
    assert mbar_expand(P, delta((2,), (2,), (1,))) == Chain.from_symbol(2, delta((2,), (1,), (2,)))
    assert mbar_expand(P, delta((1,), (1,), (2,))) == Chain.from_symbol(2, delta((1,), (1,), (2,)))


def test_mbar_full_slots_vanish_p2():
    P = Params(2, 1)
    for I in [(0,), (1,), (3,)]:
        assert quotient_zero(P, Chain.from_symbol(2, delta(I, (2,), (2,))))


@pytest.mark.parametrize("P,r", [(Params(2, 1), 2), (Params(2, 1), 3), (Params(3, 1), 2), (Params(2, 1, 2), 2), (Params(3, 1, 2), 2)], ids=str)
def test_mbar_expand_round_trip(P, r):
    I = (1,) * P.n
    for sl in product(slot_set(P), repeat=r):
        sym = DeltaSymbol(I, sl)
        e = mbar_expand(P, sym)
        assert all(is_mbar_basis(P, s.slots) for s in e)
        assert quotient_zero(P, e - Chain.from_symbol(P.p, sym))
        gens = [relation_chain(P, s) for s in mbar_relation_specs(P, r, I)]
        assert span_contains(e - Chain.from_symbol(P.p, sym), [g for g in gens if g])


@pytest.mark.parametrize("P", [Params(2, 1), Params(3, 1, 2)], ids=str)
def test_mbar_expand_matches_direct(P):
    for sl in product(slot_set(P), repeat=2):
        sym = DeltaSymbol((0,) * P.n, sl)
        assert mbar_expand(P, sym) == mbar_expand_direct(P, sym)


def test_mbar_rejects_non_canonical():
    with pytest.raises(ValueError):
        mbar_expand(Params(2, 1), delta((0,), (3,), (1,)))


def test_worked_values_p2():
    P = Params(2, 1)
    assert diff0(P, (0,)).is_zero()
    assert diff1_slot(P, (1,)) == Chain.from_symbol(2, delta((0,), (1,), (1,)))
    # the (2,0,0) term survives with Gamma = 1, so the raw value is not 0,
    # but it vanishes once relations are taken into account
    d2 = diff1_slot(P, (2,))
    assert d2 == Chain.from_symbol(2, delta((0,), (2,), (2,)))
    assert quotient_zero(P, d2)
    assert eta_product(P, (0,), (3,)) == (1, (3,))
    assert eta_product(P, (5,), (0,)) == (1, (5,))
    x = Chain.from_symbol(2, delta((1,), (1,)))
    assert differential(P, x) == Chain.from_symbol(2, delta((0,), (1,), (1,)))
    assert differential(P, differential(P, Chain.from_symbol(2, delta((1,))))).is_zero()
    assert differential(P, Chain.zero(2, 1)).is_zero()
    rel = relation_chain(P, RelationSpec((2,), 1, (3,)))
    assert rel == Chain(2, 2, {delta((2,), (1,), (2,)): 1, delta((2,), (2,), (1,)): 1})
    assert quotient_zero(P, rel)
    assert relation_chain(P, RelationSpec((0,), 1, (3,))) in relations_touching(P, [delta((0,), (1,), (2,))])
    assert relations_touching(P, [delta((0,), (1,), (1,))]) == []
    assert quotient_zero(P, Chain.zero(2, 2))
    assert not quotient_zero(P, Chain.from_symbol(2, delta((0,), (1,))))


def test_relation_p3_against_brute_force():
    P = Params(3, 1)
    want = {}
    for A, B, C in triples((4,)):
        if B == (4,) or C == (4,):
            continue
        AB, AC = add(A, B), add(A, C)
        if in_slot_set(P, AB) and in_slot_set(P, AC):
            s = delta((0,), AB, AC)
            want[s] = (want.get(s, 0) + multi_coproduct_coefficient(3, 3, A, B, C)) % 3
    assert relation_chain(P, RelationSpec((0,), 1, (4,))) == Chain(3, 2, want)
