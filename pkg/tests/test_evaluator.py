import random

import pytest
from hypothesis import given, settings, strategies as st

import reference
from sotc import logic as L
from sotc.corpus import RandomFormulaConfig, RandomFormulas
from sotc.encoders import hamiltonian_formula
from sotc.errors import StateCapExceeded, UnboundVariable, UnknownNumericPredicate
from sotc.evaluator import BFS, SAVITCH, EvalOptions, evaluate, holds, state_space_size, tc_reachable
from sotc.structures import Structure, enumerate_structures
from sotc.text import parse_formula

E, X, Z, Z2 = L.rel("E", 2), L.rel("X"), L.rel("Z"), L.rel("Z'")
m = L.counter("m")
SMALL = RandomFormulaConfig(max_depth=3, fo_names=("x", "y"), so_names=("P",), counter_names=("k",))


def random_structure(rng, vocab, n):
    interp = {}
    for v in vocab:
        vals = reference.values(v.sort, n)
        interp[v] = rng.choice(vals)
    return Structure(n, interp)


# -- frozen examples --------------------------------------------------------------

def test_hamiltonian_triangle_and_path():
    phi = hamiltonian_formula()
    triangle = Structure(3, {E: {(a, b) for a in range(3) for b in range(3) if a != b}})
    path = Structure(3, {E: {(0, 1), (1, 2)}})
    assert holds(triangle, phi) and not holds(path, phi)


def test_nonempty_domain():
    assert holds(Structure(1), parse_formula("E x. x = x"))


def test_counting_clause():
    phi = parse_formula("%m = #{ x | X(x) }")
    assert holds(Structure(3, {X: {(0,), (1,)}, m: 2}), phi)
    assert not holds(Structure(3, {X: {(0,), (1,)}, m: 1}), phi)


def test_set_growth_reachability_and_limit():
    # X' = X plus one new element; from the empty set to {0,1} takes two steps
    src = "[TC{lim}{{X ; Y}} E z. (!X(z) & A w. (Y(w) <-> X(w) | w = z))](Z ; Z')"
    a = Structure(2, {Z: set(), Z2: {(0,), (1,)}})
    assert holds(a, parse_formula(src.format(lim="")))
    assert not holds(a, parse_formula(src.format(lim="^1")))
    assert holds(a, parse_formula(src.format(lim="^2")))


def test_strict_tc_needs_a_step():
    phi = parse_formula("[TC{X ; Y} E z. (Y(z) & !Y(z))](Z ; Z)")
    assert not holds(Structure(2, {Z: set()}), phi)
    loop = parse_formula("[TC{x ; y} E(x, y)](u ; u)")
    u = L.fo("u")
    assert not holds(Structure(2, {E: set(), u: 0}), loop)
    assert holds(Structure(2, {E: {(0, 1), (1, 0)}, u: 0}), loop)


def test_literal_equicard_example():
    # printed form: strict TC of "remove one element from each side"
    src = (
        "[TC{X, Y ; X', Y'} (E a. (X(a) & A e. (X'(e) <-> X(e) & e != a)) & "
        "E b. (Y(b) & A e. (Y'(e) <-> Y(e) & e != b)))](Z, Z' ; W, W)"
    )
    phi = parse_formula(f"E W. (A x. !W(x) & {src})")
    assert holds(Structure(2, {Z: {(0,)}, Z2: {(1,)}}), phi)
    assert not holds(Structure(2, {Z: set(), Z2: set()}), phi)


# -- errors and reports -----------------------------------------------------------

def test_missing_vocabulary():
    with pytest.raises(UnboundVariable):
        evaluate(Structure(2), parse_formula("E(x, x)"))


def test_unknown_numeric_predicate():
    with pytest.raises(UnknownNumericPredicate):
        evaluate(Structure(2, {m: 1}), parse_formula("@nosuch(%m)"))


def test_state_cap():
    phi = parse_formula("[TC{X ; Y} E z. (!X(z) & A w. (Y(w) <-> X(w) | w = z))](Z ; Z')")
    a = Structure(4, {Z: set(), Z2: {(i,) for i in range(4)}})
    with pytest.raises(StateCapExceeded):
        evaluate(a, phi, EvalOptions(max_states=2, symmetry=False))
    rep = evaluate(a, phi, EvalOptions(collect_stats=True))
    assert rep.result and rep.tc_calls >= 1 and rep.states_explored >= 1
    assert set(rep.as_dict()) == {"result", "states_explored", "tc_calls", "max_frontier"}


def test_options_validation():
    with pytest.raises(ValueError):
        EvalOptions(tc_strategy="dfs")
    with pytest.raises(ValueError):
        EvalOptions(max_states=0)


def test_tc_reachable_requires_tc_node():
    with pytest.raises(TypeError):
        tc_reachable(Structure(1), parse_formula("E x. x = x"))


def test_state_space_size():
    tc = parse_formula("[TC{X, x ; Y, y} E(x, y)](Z, u ; Z', v)")
    assert state_space_size(tc, 3) == 8 * 3


# -- differential tests against the naive oracle ---------------------------------

@settings(max_examples=60)
@given(st.integers(0, 2**32 - 1))
def test_random_formulas_match_reference(seed):
    rng = random.Random(seed)
    phi = RandomFormulas(seed, SMALL).formula()
    vocab = sorted(L.free_vars(phi))
    for n in (1, 2):
        a = random_structure(rng, vocab, n)
        assert holds(a, phi) == reference.holds(a, phi), (str(phi), a)


@settings(max_examples=30)
@given(st.integers(0, 2**32 - 1))
def test_symmetry_switch_does_not_change_verdicts(seed):
    rng = random.Random(seed)
    phi = RandomFormulas(seed, SMALL).formula()
    vocab = sorted(L.free_vars(phi))
    a = random_structure(rng, vocab, rng.choice([2, 3]))
    on = evaluate(a, phi, EvalOptions(symmetry=True)).result
    off = evaluate(a, phi, EvalOptions(symmetry=False)).result
    assert on == off


TC_CASES = [
    "E z. (!X(z) & A w. (Y(w) <-> X(w) | w = z))",
    "E z. (X(z) & A w. (Y(w) <-> X(w) & w != z))",
    "A w. (Y(w) <-> !X(w))",
    "E z. E w. (X(z) & !X(w) & Y(w) & !Y(z) & P(w))",
    "A w. (X(w) -> Y(w)) & E w. (Y(w) & P(w))",
]


@pytest.mark.parametrize("body", TC_CASES)
def test_tc_monadic_exhaustive_against_reference(body):
    P = L.rel("P")
    phi = parse_formula(f"[TC{{X ; Y}} {body}](Z ; Z')")
    for n in (1, 2, 3):
        for a in enumerate_structures([P, Z, Z2], n):
            assert holds(a, phi) == reference.holds(a, phi)


def test_bfs_and_savitch_agree_small():
    rng = random.Random(7)
    P = L.rel("P")
    for i in range(25):
        body = rng.choice(TC_CASES)
        phi = parse_formula(f"[TC{{X ; Y}} {body}](Z ; Z')")
        a = random_structure(rng, [P, Z, Z2], rng.choice([2, 3]))
        assert holds(a, phi, tc_strategy=BFS) == holds(a, phi, tc_strategy=SAVITCH)


def test_de_morgan_random():
    rng = random.Random(3)
    gen = RandomFormulas(11, SMALL)
    for _ in range(20):
        f, g = gen.formula(), gen.formula()
        vocab = sorted(L.free_vars(f) | L.free_vars(g))
        a = random_structure(rng, vocab, 2)
        lhs = holds(a, L.Not(L.Or(f, g)))
        assert lhs == (holds(a, L.Not(f)) and holds(a, L.Not(g)))


def test_capped_search_can_be_resumed():
    # a search aborted by the state cap leaves the shared BFS state consistent
    phi = parse_formula("[TC{X ; Y} E z. (!X(z) & A w. (Y(w) <-> X(w) | w = z))](Z ; Z')")
    for n in (3, 4):
        a = Structure(n, {Z: set(), Z2: {(i,) for i in range(n)}})
        with pytest.raises(StateCapExceeded):
            evaluate(a, phi, EvalOptions(max_states=1))
        assert holds(a, phi) == reference.holds(a, phi) is True
        b = Structure(n, {Z: {(0,)}, Z2: set()})
        assert holds(b, phi) is False
