import json

import pytest
from hypothesis import given, strategies as st

from sotc import logic as L
from sotc.corpus import CMSO_CORPUS, COLLAPSE_CORPUS, GENERAL_CORPUS, RandomFormulas
from sotc.errors import DomainEmpty, FormulaSyntaxError, InconsistentArity
from sotc.structures import Structure, enumerate_structures
from sotc.text import dump_structure, lexical_kind, parse_formula, parse_structure, print_formula, print_structure

x, y = L.fo("x"), L.fo("y")
E, P = L.rel("E", 2), L.rel("P")


def test_parse_builds_expected_tree():
    phi = parse_formula("E x. (P(x) | x != y)")
    assert phi == L.Exists(x, L.Or(L.atom(P, x), L.Not(L.Eq(x, y))))


def test_precedence_and_associativity():
    assert parse_formula("P(x) & P(y) | P(x)") == L.Or(L.And(L.atom(P, x), L.atom(P, y)), L.atom(P, x))
    a, b, c = (L.atom(L.rel(n), x) for n in "ABC")
    assert parse_formula("A(x) -> B(x) -> C(x)") == L.Implies(a, L.Implies(b, c))
    # quantifier scope runs as far right as possible
    assert parse_formula("E x. P(x) & P(y)") == L.Exists(x, L.And(L.atom(P, x), L.atom(P, y)))


def test_tc_and_limit_syntax():
    phi = parse_formula("[TC^2{x ; y} E(x, y)](u ; v)")
    assert isinstance(phi, L.TC) and phi.limit == 2
    assert phi.args_left == (L.fo("u"),) and phi.args_right == (L.fo("v"),)


def test_lexical_convention():
    assert lexical_kind("X") == "so" and lexical_kind("x") == "fo"
    # lowercase names in relation position are relation symbols
    phi = parse_formula("s(x, y)")
    assert phi == L.atom(L.rel("s", 2), x, y)


@pytest.mark.parametrize(
    "src, col",
    [("E x.", 5), ("P(x) &", 7), ("x = X", 5), ("P(x", 4), ("_fresh1 = x", 1)],
)
def test_syntax_errors_carry_position(src, col):
    with pytest.raises(FormulaSyntaxError) as info:
        parse_formula(src)
    assert info.value.line == 1 and info.value.column == col


def test_inconsistent_arity():
    with pytest.raises(InconsistentArity):
        parse_formula("E(x, y) & E(x)")


def test_reserved_names_allowed_on_request():
    phi = parse_formula("_fresh1 = x", allow_reserved=True)
    assert parse_formula(print_formula(phi), allow_reserved=True) == phi


@pytest.mark.parametrize("src", GENERAL_CORPUS + CMSO_CORPUS + COLLAPSE_CORPUS)
def test_corpus_round_trip(src):
    phi = parse_formula(src)
    assert parse_formula(print_formula(phi)) == phi


@given(st.integers(0, 2**32 - 1))
def test_random_formula_round_trip(seed):
    phi = RandomFormulas(seed).formula()
    L.sort_check(phi, L.free_vars(phi))
    assert parse_formula(print_formula(phi)) == phi


def test_structure_json_round_trip_exhaustive():
    vocab = [P, x, L.counter("k")]
    for a in enumerate_structures(vocab, 2):
        assert parse_structure(dump_structure(a)) == a


def test_structure_json_shape():
    a = Structure(3, {E: {(0, 1)}, x: 2, L.counter("k"): 3})
    doc = print_structure(a)
    assert doc == {
        "domain_size": 3,
        "interpretation": {
            "E": {"arity": 2, "tuples": [[0, 1]]},
            "k": {"counter": 3},
            "x": {"element": 2},
        },
    }
    assert parse_structure(json.dumps(doc)) == a


def test_structure_rejects_empty_domain():
    with pytest.raises(DomainEmpty):
        parse_structure({"domain_size": 0})
