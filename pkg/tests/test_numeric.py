import itertools

import pytest

from sotc import logic as L
from sotc.errors import ArityMismatch, DuplicateName, NotFO1TC, RegistrySealed, StraySymbol, UnknownNumericPredicate
from sotc.evaluator import holds
from sotc.numeric import (
    DEFAULT_REGISTRY,
    NumericPredicate,
    Registry,
    arg_var,
    decide,
    default_registry,
    fo1tc_definition,
    successor_structure,
)
from sotc.structures import Structure
from sotc.text import parse_formula

# plain arithmetic, kept apart from the library's own deciders
ORACLE = {
    "plus1": lambda n, a, b: a == b,
    "plus2": lambda n, a, b, c: a + b == c,
    "plus3": lambda n, a, b, c, d: a + b + c == d,
    "times": lambda n, a, b, c: a * b == c,
    "modsum": lambda n, a, b, c: (a + b - c) % n == 0,
}


@pytest.mark.parametrize("name", sorted(ORACLE))
def test_native_matches_oracle(name):
    k = DEFAULT_REGISTRY.get(name).arity
    for n in range(1, 6):
        for args in itertools.product(range(n + 1), repeat=k):
            assert decide(name, n, args) == ORACLE[name](n, *args)


@pytest.mark.parametrize("name", ["plus1", "plus2", "plus3", "times", "modsum"])
def test_definition_matches_native(name):
    definition = fo1tc_definition(name)
    k = DEFAULT_REGISTRY.get(name).arity
    top = 5 if k <= 3 else 3
    for n in range(1, top + 1):
        for args in itertools.product(range(n + 1), repeat=k):
            b = successor_structure(n, args)
            assert holds(b, definition) == ORACLE[name](n, *args), (name, n, args)


def test_definitions_are_fo1tc():
    for name in DEFAULT_REGISTRY.names():
        assert L.classify(fo1tc_definition(name)).isFO1TC


def test_successor_structure_shape():
    b = successor_structure(3, (1, 2))
    assert b.domain_size == 4
    assert b[L.rel("s", 2)] == {(0, 1), (1, 2), (2, 3)}
    assert b[arg_var(1)] == 1 and b[arg_var(2)] == 2


def test_registry_errors():
    with pytest.raises(UnknownNumericPredicate):
        DEFAULT_REGISTRY.get("nosuch")
    with pytest.raises(ArityMismatch):
        decide("plus2", 3, (1, 2))
    with pytest.raises(RegistrySealed):
        DEFAULT_REGISTRY.register(DEFAULT_REGISTRY.get("times"))
    r = default_registry()
    with pytest.raises(DuplicateName):
        r.register(r.get("times"))


def test_register_checks_definition():
    r = Registry()
    x1 = arg_var(1)
    ok = NumericPredicate("iszero", 1, lambda n, a: a == 0, parse_formula("!(E w. s(w, x1))"))
    r.register(ok)
    assert r.decide("iszero", 3, (0,)) and not r.decide("iszero", 3, (2,))
    with pytest.raises(NotFO1TC):
        r.register(NumericPredicate("bad", 1, lambda n, a: True, parse_formula("E X. X(x1)")))
    with pytest.raises(StraySymbol):
        r.register(NumericPredicate("stray", 1, lambda n, a: True, parse_formula("x1 = y")))
    assert L.free_vars(ok.definition) <= {L.rel("s", 2), x1}


def test_custom_registry_in_evaluation():
    from sotc.evaluator import EvalOptions, evaluate

    r = default_registry()
    r.register(NumericPredicate("even", 1, lambda n, a: a % 2 == 0, parse_formula(
        "E a. (!(E w. s(w, a)) & (x1 = a | [TC{u ; v} E m. (s(u, m) & s(m, v))](a ; x1)))"
    )))
    k = L.counter("k")
    phi = parse_formula("@even(%k)")
    for v in range(4):
        rep = evaluate(Structure(3, {k: v}), phi, EvalOptions(registry=r))
        assert rep.result == (v % 2 == 0)
