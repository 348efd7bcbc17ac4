import itertools

import pytest
from hypothesis import given, strategies as st

from sotc import logic as L
from sotc.errors import (
    ArityMismatch,
    CounterOutOfRange,
    DomainEmpty,
    ElementOutOfRange,
    NotUnaryVocabulary,
    SortMismatch,
)
from sotc.structures import (
    Structure,
    count_values,
    enumerate_structures,
    enumerate_values,
    parikh_vector,
    structure_from_cells,
)

E, X, Y = L.rel("E", 2), L.rel("X"), L.rel("Y")
x, k = L.fo("x"), L.counter("k")


@pytest.mark.parametrize(
    "vocab, n, count",
    [([E], 2, 16), ([x], 3, 3), ([X, x], 2, 8), ([k], 2, 3), ([], 4, 1)],
)
def test_enumeration_counts(vocab, n, count):
    got = list(enumerate_structures(vocab, n))
    assert len(got) == count
    assert len(set(got)) == count
    expected = 1
    for v in vocab:
        expected *= count_values(v.sort, n)
    assert expected == count


def test_enumeration_order_last_varies_fastest():
    got = [(a[X], a[x]) for a in enumerate_structures([X, x], 2)]
    assert got[0] == (frozenset(), 0) and got[1] == (frozenset(), 1)
    assert got[2] == (frozenset({(0,)}), 0)


def test_relation_values_bitmask_order():
    vals = enumerate_values(X.sort, 2)
    assert vals == (frozenset(), frozenset({(0,)}), frozenset({(1,)}), frozenset({(0,), (1,)}))


@pytest.mark.parametrize(
    "interp, error",
    [
        ({x: 3}, ElementOutOfRange),
        ({k: 4}, CounterOutOfRange),
        ({E: {(0,)}}, ArityMismatch),
        ({X: {(5,)}}, ElementOutOfRange),
        ({X: 1}, SortMismatch),
        ({x: True}, SortMismatch),
    ],
)
def test_structure_validation(interp, error):
    with pytest.raises(error):
        Structure(3, interp)


def test_counter_may_equal_domain_size():
    assert Structure(3, {k: 3})[k] == 3


def test_empty_domain_rejected():
    with pytest.raises(DomainEmpty):
        Structure(0)


def test_with_updates_extends_vocabulary():
    a = Structure(2, {x: 0})
    b = a.with_updates([(X, {(1,)})])
    assert b.vocabulary == {x, X} and a.vocabulary == {x}
    with pytest.raises(ElementOutOfRange):
        a.with_updates([(x, 2)])


def test_structures_are_immutable_and_hashable():
    a = Structure(2, {X: {(0,)}})
    with pytest.raises(AttributeError):
        a.domain_size = 3
    assert a == Structure(2, {X: [(0,)]}) and hash(a) == hash(Structure(2, {X: [(0,)]}))


def test_parikh_cell_order():
    # cell index bit j <-> membership in the j-th variable (sorted by name)
    a = Structure(4, {X: {(0,), (1,)}, Y: {(1,), (2,)}})
    assert parikh_vector(a) == (1, 1, 1, 1)
    b = Structure(4, {X: {(0,), (1,), (2,)}})
    assert parikh_vector(b) == (1, 3)


def test_parikh_needs_unary_vocabulary():
    with pytest.raises(NotUnaryVocabulary):
        parikh_vector(Structure(2, {E: set()}))


@given(st.lists(st.integers(0, 3), min_size=4, max_size=4).filter(lambda c: sum(c) > 0))
def test_cells_round_trip(cells):
    a = structure_from_cells(cells, [X, Y])
    assert parikh_vector(a, [X, Y]) == tuple(cells)


def test_parikh_sums_to_domain_exhaustive():
    for n in range(1, 4):
        for a in enumerate_structures([X, Y], n):
            v = parikh_vector(a)
            assert sum(v) == n
            # oracle: count directly
            for idx in range(4):
                members = [e for e in range(n) if ((e,) in a[X]) == bool(idx & 1) and ((e,) in a[Y]) == bool(idx & 2)]
                assert v[idx] == len(members)


def test_enumerate_values_product_size():
    assert len(enumerate_values(E.sort, 2)) == 2 ** 4
    assert len(list(itertools.islice(enumerate_structures([E, X], 2), 5))) == 5
