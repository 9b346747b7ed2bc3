import pytest
from hypothesis import given, settings, strategies as st

from logjet.combinat import InconsistencyError
from logjet.indexing import delta
from logjet.linalg_fp import Chain, Echelon, accumulate, scale, solve_coordinates, span_contains

from _oracles import brute_span_contains

SYMS = [delta((i,), (j,)) for i in range(3) for j in (1, 2)]


def chains(p, max_terms=4):
    return st.dictionaries(st.sampled_from(SYMS), st.integers(0, p - 1), max_size=max_terms).map(
        lambda d: Chain(p, 1, d)
    )


def test_chain_basics():
    a = Chain(3, 1, {SYMS[0]: 1, SYMS[1]: 3})
    assert len(a) == 1 and a.coeff(SYMS[1]) == 0
    b = Chain.from_symbol(3, SYMS[0], 2)
    assert (a + b).is_zero()
    assert a - a == Chain.zero(3, 1)
    assert 2 * a == Chain(3, 1, {SYMS[0]: 2})
    assert -a == Chain(3, 1, {SYMS[0]: 2})
    assert not Chain.zero(3, 1)
    assert a.support() == {SYMS[0]}


def test_chain_render():
    a = Chain(5, 1, {delta((2,), (1,)): 2, delta((0,), (1,)): 1})
    assert a.render() == "d((0);(1)) + 2*d((2);(1))"
    assert Chain.zero(5, 1).render() == "0"


def test_chain_type_errors():
    with pytest.raises(ValueError):
        Chain(2, 2, {SYMS[0]: 1})
    with pytest.raises(ValueError):
        Chain(2, 1) + Chain(3, 1)
    with pytest.raises(ValueError):
        Chain(2, 1) + Chain(2, 0)


def test_chain_hash_consistent():
    a = Chain(2, 1, {SYMS[0]: 1})
    assert hash(a) == hash(Chain(2, 1, {SYMS[0]: 3}))
    assert a == Chain(2, 1, {SYMS[0]: 3})


@given(st.sampled_from([2, 3, 5]).flatmap(lambda p: st.tuples(chains(p), chains(p), chains(p), st.integers(-10, 10))))
def test_chain_vector_space_laws(args):
    a, b, c, k = args
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert scale(k, a + b) == scale(k, a) + scale(k, b)
    assert a + scale(-1, a) == Chain.zero(a.p, 1)


def test_accumulate_drops_zero():
    d = {}
    accumulate(3, d, "x", 2)
    accumulate(3, d, "x", 1)
    assert d == {}


def test_echelon_fully_reduced():
    e = Echelon(5)
    e.add({"a": 1, "b": 2})
    e.add({"b": 1, "c": 1})
    assert set(e.rows) == {"a", "b"}
    # no row contains another row's pivot
    for piv, row in e.rows.items():
        assert row[piv] == 1
        assert not (set(row) - {piv}) & set(e.rows)
    assert e.contains({"a": 1, "c": 3})  # a + 2b - 2(b + c) = a - 2c
    assert not e.contains({"c": 1})
    assert not e.add({"a": 2, "b": 4})


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3]).flatmap(lambda p: st.tuples(chains(p, 3), st.lists(chains(p, 3), max_size=4))))
def test_span_contains_against_brute_force(args):
    v, gens = args
    assert span_contains(v, gens) == brute_span_contains(v.p, v.terms, [g.terms for g in gens])


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3]).flatmap(lambda p: st.tuples(chains(p, 3), st.lists(chains(p, 3), max_size=3))))
def test_combinations_are_in_span(args):
    v, gens = args
    combo = Chain.zero(v.p, 1)
    for k, g in enumerate(gens):
        combo = combo + scale(k + 1, g)
    assert span_contains(combo, gens)


def test_solve_coordinates_example():
    # relation b1 - x = 0 lets x be written on the basis {b1, b2}
    p = 3
    b1, b2, x = SYMS[0], SYMS[1], SYMS[2]
    rel = Chain(p, 1, {x: 1, b1: 2})
    v = Chain(p, 1, {x: 2, b2: 1})
    coords = solve_coordinates(v, [b1, b2], [rel])
    assert coords == {b1: 2, b2: 1}
    recon = Chain(p, 1, coords)
    assert span_contains(v - recon, [rel])


def test_solve_coordinates_unreachable():
    b1, x = SYMS[0], SYMS[2]
    assert solve_coordinates(Chain.from_symbol(2, x), [b1], []) is None


def test_solve_coordinates_non_unique():
    b1, b2 = SYMS[0], SYMS[1]
    rel = Chain(2, 1, {b1: 1, b2: 1})
    with pytest.raises(InconsistencyError):
        solve_coordinates(Chain.from_symbol(2, b1), [b1, b2], [rel])


def test_mixed_degree_rejected():
    with pytest.raises(ValueError):
        span_contains(Chain.zero(2, 1), [Chain.zero(2, 1), Chain.from_symbol(2, delta((0,)))])


def test_worked_values():
    x, y = SYMS[0], SYMS[1]
    v = Chain(2, 1, {x: 1, y: 1})
    assert v + Chain.zero(2, 1) == v
    assert (v + v).is_zero()
    assert Chain(3, 1, {x: 2}) + Chain(3, 1, {x: 2}) == Chain(3, 1, {x: 1})
    assert span_contains(Chain.zero(2, 1), [v])
    assert span_contains(v, [v])
    assert not span_contains(Chain.from_symbol(2, x), [v])
    assert solve_coordinates(Chain.from_symbol(2, x), [x, y], []) == {x: 1, y: 0}
    assert solve_coordinates(Chain.zero(2, 1), [x, y], []) == {x: 0, y: 0}
