"""Formula translations.

* equicardinality and the Härtig quantifier in MSO(TC);
* the lifting ``+`` from FO(1TC) over a successor structure to MSO(TC) over
  sets whose sizes stand for numbers;
* counter elimination ``*`` from CMSO(TC) to MSO(TC);
* the collapse of SO(2TC)[E] to existential first-order logic;
* a brute-force equivalence checker over all small structures.
"""

from __future__ import annotations

import enum
import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Optional, Union

from . import logic as L
from .errors import (
    ArityMismatch,
    CaptureDetected,
    NameClash,
    NotCMSOTC,
    NotExistsFO,
    NotFO1TC,
    NotInFragment,
    NotSecondOrderTuple,
    ShapeMismatch,
    StraySymbol,
)
from .evaluator import EvalOptions, evaluate, state_space_size
from .numeric import DEFAULT_REGISTRY, SUCC, Registry
from .structures import Structure, enumerate_structures


class Fidelity(str, enum.Enum):
    PAPER_LITERAL = "paper"
    CORRECTED = "corrected"
    PATCHED = "corrected"


MONADIC = L.second_order(1)


def _fresh_for(*formulas: L.Formula, fresh: Optional[L.FreshNames] = None) -> L.FreshNames:
    if fresh is None:
        return L.FreshNames(*formulas)
    for f in formulas:
        fresh.avoid(f)
    return fresh


# -- equicardinality ----------------------------------------------------------------

def decrement_formula(x, y, x2, y2, fresh: L.FreshNames) -> L.Formula:
    """``x2 = x minus {a}`` and ``y2 = y minus {b}`` for some ``a`` in ``x``, ``b`` in ``y``.

    Written as two independent conjuncts so that TC successor search can
    choose ``x2`` and ``y2`` separately.
    """
    a, b, e = fresh(L.FIRST_ORDER), fresh(L.FIRST_ORDER), fresh(L.FIRST_ORDER)

    def drop(s, s2, c):
        rest = L.Forall(e, L.Iff(L.atom(s2, e), L.And(L.atom(s, e), L.neq(e, c))))
        return L.Exists(c, L.And(L.atom(s, c), rest))

    return L.And(drop(x, x2, a), drop(y, y2, b))


def equicard_formula(
    z: L.Variable,
    z2: L.Variable,
    fidelity: Fidelity = Fidelity.PATCHED,
    fresh: Optional[L.FreshNames] = None,
) -> L.Formula:
    """``|Z| = |Z'|`` by removing one element from each set per TC step.

    The literal construction needs at least one step and so fails when both
    sets are empty; the patched variant adds that case as a disjunct.
    """
    if z == z2:
        raise ValueError("equicard_formula needs two distinct set variables")
    fresh = _fresh_for(L.Eq(L.fo("x"), L.fo("x")), fresh=fresh)
    fresh.used.update((z.name, z2.name))
    x, y, x2, y2, empty = (fresh(MONADIC) for _ in range(5))
    e = fresh(L.FIRST_ORDER)
    step = decrement_formula(x, y, x2, y2, fresh)
    ec = L.Exists(
        empty,
        L.And(L.Forall(e, L.Not(L.atom(empty, e))), L.TC((x, y), (x2, y2), step, (z, z2), (empty, empty))),
    )
    if Fidelity(fidelity) is Fidelity.PAPER_LITERAL:
        return ec
    both_empty = L.And(L.Forall(e, L.Not(L.atom(z, e))), L.Forall(e, L.Not(L.atom(z2, e))))
    return L.Or(ec, both_empty)


def haertig_encode(
    phi: L.Formula,
    x: L.Variable,
    psi: L.Formula,
    y: L.Variable,
    fresh: Optional[L.FreshNames] = None,
) -> L.Formula:
    """``H xy(phi, psi)``: ``{x | phi}`` and ``{y | psi}`` have the same size."""
    fresh = _fresh_for(phi, psi, fresh=fresh)
    z, z2 = fresh(MONADIC), fresh(MONADIC)
    return L.exists(
        (z, z2),
        L.conj(
            L.Forall(x, L.Iff(phi, L.atom(z, x))),
            L.Forall(y, L.Iff(psi, L.atom(z2, y))),
            equicard_formula(z, z2, Fidelity.PATCHED, fresh),
        ),
    )


# -- FO(1TC) to MSO(TC) -------------------------------------------------------------

def capitalize(name: str) -> str:
    for i, ch in enumerate(name):
        if ch.isalpha():
            return name[:i] + ch.upper() + name[i + 1:]
    raise ValueError(f"name {name!r} has no letter")


def as_set_variable(v: L.Variable) -> L.Variable:
    """The monadic variable standing for element or counter variable ``v``."""
    return L.rel(capitalize(v.name), 1)


def plus_translate(phi: L.Formula, fresh: Optional[L.FreshNames] = None) -> L.Formula:
    """Lift an FO(1TC) formula over ``{s, x1..}`` to MSO(TC) over ``{X1..}``.

    Numbers are simulated by set sizes: element variable ``x`` becomes the
    monadic variable ``X`` (first letter capitalized), equality becomes
    equicardinality and ``s(x, y)`` becomes "``Y`` is ``X`` plus one element".
    """
    tag = L.classify(phi)
    if not tag.isFO1TC:
        raise NotFO1TC("plus_translate needs an FO(1TC) formula")
    for f in L.subformulas(phi):
        if isinstance(f, L.Atom) and f.rel != SUCC:
            raise StraySymbol(f"relation {f.rel} is not the successor symbol")
    for v in L.free_vars(phi):
        if not (v == SUCC or v.sort.is_fo):
            raise StraySymbol(f"unexpected free symbol {v}")
    lifted_names = {capitalize(v.name) for v in L.all_variables(phi) if v.sort.is_fo}
    fresh = _fresh_for(phi, fresh=fresh)
    fresh.used.update(lifted_names)
    return _plus(phi, fresh)


def _plus(f: L.Formula, fresh: L.FreshNames) -> L.Formula:
    up = as_set_variable
    if isinstance(f, L.Eq):
        x, y = fresh(L.FIRST_ORDER), fresh(L.FIRST_ORDER)
        return haertig_encode(L.atom(up(f.left), x), x, L.atom(up(f.right), y), y, fresh)
    if isinstance(f, L.Atom):
        xi, xj = up(f.args[0]), up(f.args[1])
        z, x, y = fresh(L.FIRST_ORDER), fresh(L.FIRST_ORDER), fresh(L.FIRST_ORDER)
        grown = L.Or(L.atom(xi, x), L.Eq(x, z))
        return L.Exists(z, L.And(L.Not(L.atom(xi, z)), haertig_encode(grown, x, L.atom(xj, y), y, fresh)))
    if isinstance(f, L.QUANTIFIERS):
        return type(f)(up(f.var), _plus(f.body, fresh))
    if isinstance(f, L.TC):
        return L.TC(
            tuple(map(up, f.left)),
            tuple(map(up, f.right)),
            _plus(f.body, fresh),
            tuple(map(up, f.args_left)),
            tuple(map(up, f.args_right)),
            f.limit,
        )
    return L.map_children(f, lambda c: _plus(c, fresh))


@lru_cache(maxsize=64)
def _lifted_definition(definition: L.Formula) -> L.Formula:
    return plus_translate(definition)


def lifted_predicate(
    name: str,
    sets: list[L.Variable],
    registry: Registry = DEFAULT_REGISTRY,
    fresh: Optional[L.FreshNames] = None,
) -> L.Formula:
    """MSO(TC) formula saying the sizes of ``sets`` satisfy numeric predicate ``name``."""
    pred = registry.get(name)
    if len(sets) != pred.arity:
        raise ArityMismatch(f"{name} takes {pred.arity} arguments, got {len(sets)}")
    if fresh is None:
        fresh = L.FreshNames(avoid=[v.name for v in sets])
    lifted = L.rename_bound_apart(_lifted_definition(registry.definition(name)), fresh)
    ren = {as_set_variable(L.fo(f"x{i}")): v for i, v in enumerate(sets, 1)}
    return L.substitute(lifted, ren)


# -- counter elimination ------------------------------------------------------------

def counter_as_set(mu: L.Variable) -> L.Variable:
    return as_set_variable(mu)


def eliminate_counters(phi: L.Formula, registry: Registry = DEFAULT_REGISTRY) -> L.Formula:
    """Translate CMSO(TC) to MSO(TC); counter ``%m`` becomes set ``M``.

    If a structure B interprets each such set with as many elements as the
    counter's value in A (and agrees with A elsewhere), then A satisfies
    ``phi`` iff B satisfies the result.
    """
    tag = L.classify(phi)
    if not tag.isCMSOTC:
        raise NotCMSOTC("counter elimination needs a CMSO(TC) formula")
    variables = L.all_variables(phi)
    counters = {v for v in variables if v.sort.is_counter}
    taken = {v.name: v for v in variables if not v.sort.is_counter}
    for mu in counters:
        s = counter_as_set(mu)
        if s.name in taken:
            raise NameClash(f"counter {mu} maps to {s.name}, which the formula already uses")
    for f in L.subformulas(phi):
        if isinstance(f, L.NumAtom):
            registry.get(f.pred)
    fresh = L.FreshNames(phi, avoid=[counter_as_set(m).name for m in counters])
    return _star(phi, registry, fresh)


def _star(f: L.Formula, registry: Registry, fresh: L.FreshNames) -> L.Formula:
    up = lambda v: counter_as_set(v) if v.sort.is_counter else v  # noqa: E731
    if isinstance(f, (L.Eq, L.Atom)):
        return f
    if isinstance(f, L.NumAtom):
        return lifted_predicate(f.pred, [up(a) for a in f.args], registry, fresh)
    if isinstance(f, L.CounterCard):
        y = fresh(L.FIRST_ORDER)
        return haertig_encode(_star(f.body, registry, fresh), f.var, L.atom(up(f.counter), y), y, fresh)
    if isinstance(f, L.QUANTIFIERS):
        return type(f)(up(f.var), _star(f.body, registry, fresh))
    if isinstance(f, L.TC):
        return L.TC(
            tuple(map(up, f.left)),
            tuple(map(up, f.right)),
            _star(f.body, registry, fresh),
            tuple(map(up, f.args_left)),
            tuple(map(up, f.args_right)),
            f.limit,
        )
    return L.map_children(f, lambda c: _star(c, registry, fresh))


def simulating_structures(a: Structure) -> Iterable[Structure]:
    """Every counter-free structure that simulates ``a``.

    Counters are replaced by sets of the same size, in all possible ways.
    """
    counters = sorted(v for v in a.interp if v.sort.is_counter)
    base = {v: x for v, x in a.interp.items() if not v.sort.is_counter}
    choices = [
        [frozenset((e,) for e in c) for c in itertools.combinations(range(a.domain_size), a.interp[mu])]
        for mu in counters
    ]
    for pick in itertools.product(*choices):
        interp = dict(base)
        for mu, s in zip(counters, pick):
            interp[counter_as_set(mu)] = s
        yield Structure(a.domain_size, interp)


# -- existential SO(2TC) collapse ---------------------------------------------------

def _require_exists_fo(theta: L.Formula) -> None:
    if not L.classify(theta).isExistsFO:
        raise NotExistsFO("expected an existential first-order formula")


def tc_bound(theta: L.Formula, vocab: Iterable[L.Variable] = ()) -> int:
    """Conservative path-length bound for a 2TC operator with body ``theta``.

    ``k = T * (n(n^2+n)+1)^n * (n+2) + 2`` with ``n`` the number of
    existential element variables and ``T = 2^a`` for the ``a`` distinct
    atomic subformulas of ``theta``.
    """
    _require_exists_fo(theta)
    core = L.normalize(theta)
    n = sum(1 for f in L.subformulas(core) if isinstance(f, L.Exists))
    atoms = {f for f in L.subformulas(core) if isinstance(f, (L.Eq, L.Atom))}
    t = 2 ** len(atoms)
    return t * (n * (n * n + n) + 1) ** n * (n + 2) + 2


def unroll_tc(tc: L.TC, k: int, fresh: Optional[L.FreshNames] = None) -> L.Formula:
    """Existential second-order formula equivalent to ``TC^k`` of a 2TC node."""
    if not isinstance(tc, L.TC):
        raise ShapeMismatch("unroll_tc expects a TC node")
    if not all(v.sort.is_so for v in tc.left + tc.args_left + tc.args_right):
        raise NotSecondOrderTuple("unroll_tc needs TC over tuples of relation variables")
    if k < 1:
        raise ValueError("k must be at least 1")
    fresh = _fresh_for(tc, fresh=fresh)
    theta = tc.body

    def inst(src, dst):
        ren = dict(zip(tc.left, src))
        ren.update(zip(tc.right, dst))
        return L.substitute(theta, ren)

    mids = [tuple(fresh(v.sort) for v in tc.left) for _ in range(k - 1)]
    y, y2 = tc.args_left, tc.args_right
    disjuncts = []
    for n in range(k):
        end = inst(y if n == 0 else mids[n - 1], y2)
        moves = [inst(y if i == 1 else mids[i - 2], mids[i - 1]) for i in range(1, n + 1)]
        disjuncts.append(L.conj(end, *moves))
    return L.exists([v for tup in mids for v in tup], L.disj(*disjuncts))


def positive_occurrences(f: L.Formula, x: L.Variable, positive: bool = True) -> int:
    """Number of atoms ``X(..)`` occurring under an even number of negations.

    Atoms below ``<->`` count as positive (they occur with both polarities).
    """
    if isinstance(f, L.Atom):
        return int(positive and f.rel == x)
    if isinstance(f, L.Not):
        return positive_occurrences(f.body, x, not positive)
    if isinstance(f, L.Implies):
        return positive_occurrences(f.left, x, not positive) + positive_occurrences(f.right, x, positive)
    if isinstance(f, L.Iff):
        both = sum(1 for g in L.subformulas(f) if isinstance(g, L.Atom) and g.rel == x)
        return both
    if isinstance(f, (L.Or, L.And)):
        return positive_occurrences(f.left, x, positive) + positive_occurrences(f.right, x, positive)
    if isinstance(f, L.QUANTIFIERS):
        return positive_occurrences(f.body, x, positive)
    return sum(1 for g in L.subformulas(f) if isinstance(g, L.Atom) and g.rel == x)


def eliminate_so_exists(phi: L.Formula, fresh: Optional[L.FreshNames] = None) -> L.Formula:
    """Replace ``E X. theta`` (theta existential first-order) by an EFO formula.

    A witness for ``X`` can be shrunk to the tuples that make positive atoms
    of ``theta`` true; shrinking keeps negated atoms true. So ``X`` becomes
    ``k`` quantified tuples, ``k`` the number of positive occurrences, plus
    the empty-witness branch. That branch writes each atom as ``v != v``,
    which keeps the result syntactically existential.
    """
    if not (isinstance(phi, L.Exists) and phi.var.sort.is_so):
        raise ShapeMismatch("expected E X. theta with X a relation variable")
    x, theta = phi.var, phi.body
    if not L.classify(theta).isExistsFO:
        raise ShapeMismatch("the body of E X must be existential first-order")
    fresh = _fresh_for(phi, fresh=fresh)
    k = positive_occurrences(theta, x)
    tuples = [tuple(fresh(L.FIRST_ORDER) for _ in range(x.sort.arity)) for _ in range(k)]

    def empty(a: L.Atom) -> L.Formula:
        return L.neq(a.args[0], a.args[0])

    def member(a: L.Atom) -> L.Formula:
        return L.disj(*(L.tuple_eq(a.args, t) for t in tuples)) if tuples else empty(a)

    theta_empty = _replace_atoms(theta, x, empty)
    theta_small = _replace_atoms(theta, x, member)
    return L.exists([v for t in tuples for v in t], L.Or(theta_empty, theta_small))


def _push_so_exists(x: L.Variable, f: L.Formula, fresh: L.FreshNames, simp: bool) -> L.Formula:
    """Eliminate ``E X. f`` after moving the quantifier as far inward as possible."""
    if x not in L.free_vars(f):
        return f
    if isinstance(f, L.Or):
        return L.Or(_push_so_exists(x, f.left, fresh, simp), _push_so_exists(x, f.right, fresh, simp))
    if isinstance(f, L.And):
        parts = _flatten_and(f)
        without = [p for p in parts if x not in L.free_vars(p)]
        if without:
            with_x = L.conj(*(p for p in parts if x in L.free_vars(p)))
            return L.conj(*without, _push_so_exists(x, with_x, fresh, simp))
    if isinstance(f, L.Exists) and f.var.sort.is_fo:
        return L.Exists(f.var, _push_so_exists(x, f.body, fresh, simp))
    out = eliminate_so_exists(L.Exists(x, f), fresh)
    return simplify_efo(out) if simp else out


def _replace_atoms(f: L.Formula, x: L.Variable, fn: Callable[[L.Atom], L.Formula]) -> L.Formula:
    if isinstance(f, L.Atom):
        return fn(f) if f.rel == x else f
    if x not in L.free_vars(f):
        return f
    return L.map_children(f, lambda c: _replace_atoms(c, x, fn))


Bound = Union[None, int, Callable[[L.TC], int]]


def collapse(phi: L.Formula, bound: Bound = None, simplify: bool = True) -> L.Formula:
    """Rewrite an SO(2TC)[E] formula into an equivalent EFO formula.

    Innermost first, ``E X. theta`` goes through :func:`eliminate_so_exists`
    and a 2TC node is unrolled to ``k`` steps and its intermediate variables
    eliminated. ``k`` is the node's own limit if it has one, otherwise
    ``bound``: an int, a function of the TC node, or :func:`tc_bound` when
    omitted. ``bound`` is trusted; the result is exact only when ``k`` covers
    the longest path that matters on the intended structures.
    """
    tag = L.classify(phi)
    if not tag.isSO2TCExists:
        raise NotInFragment("collapse needs an SO(2TC)[E] formula")
    fresh = L.FreshNames(phi)
    out = _collapse(phi, bound, fresh, simplify)
    return simplify_efo(out) if simplify else out


def _collapse(f: L.Formula, bound: Bound, fresh: L.FreshNames, simp: bool) -> L.Formula:
    if isinstance(f, L.Exists) and f.var.sort.is_so:
        body = _collapse(f.body, bound, fresh, simp)
        return _push_so_exists(f.var, body, fresh, simp)
    if isinstance(f, L.TC):
        body = _collapse(f.body, bound, fresh, simp)
        node = L.TC(f.left, f.right, body, f.args_left, f.args_right, f.limit)
        if f.limit is not None:
            k = f.limit
        elif bound is None:
            k = tc_bound(body)
        elif callable(bound):
            k = bound(node)
        else:
            k = bound
        unrolled = unroll_tc(node, k, fresh)
        mids = []
        while isinstance(unrolled, L.Exists) and unrolled.var.sort.is_so:
            mids.append(unrolled.var)
            unrolled = unrolled.body
        out = simplify_efo(unrolled) if simp else unrolled
        for v in reversed(mids):
            out = _push_so_exists(v, out, fresh, simp)
        return out
    return L.map_children(f, lambda c: _collapse(c, bound, fresh, simp))


def exact_bound(max_n: int) -> Callable[[L.TC], int]:
    """Bound function using the number of states of the node at domain size ``max_n``."""
    return lambda tc: state_space_size(tc, max_n)


# -- simplification of EFO formulas ------------------------------------------------

def _fold(f: L.Formula):
    """Fold ``x = x`` / ``x != x`` constants; returns a formula or a bool."""
    if isinstance(f, L.Eq):
        return True if f.left == f.right else f
    if isinstance(f, (L.Atom, L.NumAtom)):
        return f
    if isinstance(f, L.Not):
        r = _fold(f.body)
        if isinstance(r, bool):
            return not r
        return r.body if isinstance(r, L.Not) else L.Not(r)
    if isinstance(f, (L.Or, L.And)):
        absorbing = isinstance(f, L.Or)
        left, right = _fold(f.left), _fold(f.right)
        if left is absorbing or right is absorbing:
            return absorbing
        if isinstance(left, bool):
            return right
        if isinstance(right, bool):
            return left
        return type(f)(left, right)
    if isinstance(f, L.Implies):
        return _fold(L.Or(L.Not(f.left), f.right))
    if isinstance(f, L.Iff):
        left, right = _fold(f.left), _fold(f.right)
        if isinstance(left, bool) and isinstance(right, bool):
            return left == right
        if isinstance(left, bool):
            return right if left else L.Not(right)
        if isinstance(right, bool):
            return left if right else L.Not(left)
        return L.Iff(left, right)
    if isinstance(f, L.QUANTIFIERS) and f.var.sort.is_fo:
        r = _fold(f.body)
        return r if isinstance(r, bool) else type(f)(f.var, r)
    return L.map_children(f, _unfold_child)


def _unfold_child(f: L.Formula) -> L.Formula:
    r = _fold(f)
    if isinstance(r, bool):
        return L.verum() if r else L.falsum()
    return r


def _flatten_and(f: L.Formula) -> list[L.Formula]:
    if isinstance(f, L.And):
        return _flatten_and(f.left) + _flatten_and(f.right)
    return [f]


def _equated_with(v: L.Variable, f: L.Formula) -> Optional[L.Variable]:
    if isinstance(f, L.Eq) and f.left != f.right:
        if f.left == v:
            return f.right
        if f.right == v:
            return f.left
    return None


def _push(v: L.Variable, body: L.Formula) -> L.Formula:
    if v not in L.free_vars(body):
        return body
    if isinstance(body, L.Or):
        return L.Or(_push(v, body.left), _push(v, body.right))
    if isinstance(body, L.And):
        parts = _flatten_and(body)
        with_v = [p for p in parts if v in L.free_vars(p)]
        without = [p for p in parts if v not in L.free_vars(p)]
        if without:
            return L.conj(*without, _push(v, L.conj(*with_v)))
        for i, p in enumerate(parts):
            t = _equated_with(v, p)
            if t is not None:
                try:
                    return L.substitute(L.conj(*parts[:i], *parts[i + 1:]), {v: t})
                except CaptureDetected:
                    pass
        return L.Exists(v, body)
    if _equated_with(v, body) is not None:
        return L.verum()
    if isinstance(body, L.Exists) and body.var.sort.is_fo:
        inner = _push(v, body.body)
        if isinstance(inner, L.Exists) and inner.var == v and inner.body == body.body:
            return L.Exists(v, body)
        return _push(body.var, inner)
    return L.Exists(v, body)


def miniscope(f: L.Formula) -> L.Formula:
    """Push element quantifiers inward over disjunctions and independent conjuncts."""
    if isinstance(f, L.Exists) and f.var.sort.is_fo:
        return _push(f.var, miniscope(f.body))
    return L.map_children(f, miniscope)


def simplify_efo(f: L.Formula) -> L.Formula:
    """Constant folding followed by miniscoping; preserves equivalence."""
    r = _fold(f)
    if isinstance(r, bool):
        return L.verum() if r else L.falsum()
    r = _fold(miniscope(r))
    if isinstance(r, bool):
        return L.verum() if r else L.falsum()
    return r


# -- equivalence checking ----------------------------------------------------------

@dataclass(frozen=True)
class EquivVerdict:
    equivalent: bool
    counterexample: Optional[Structure]
    structures_checked: int

    def __post_init__(self):
        if self.equivalent != (self.counterexample is None):
            raise ValueError("a counterexample is present exactly when not equivalent")


def _check_shard(args) -> tuple[Optional[int], int]:
    phi, psi, vocab, n, shard, shards, opts = args
    checked = 0
    for i, a in enumerate(enumerate_structures(vocab, n)):
        if i % shards != shard:
            continue
        checked += 1
        if evaluate(a, phi, opts).result != evaluate(a, psi, opts).result:
            return i, checked
    return None, checked


def equiv_check(
    phi: L.Formula,
    psi: L.Formula,
    vocab: Iterable[L.Variable],
    max_n: int,
    opts: Optional[EvalOptions] = None,
    workers: int = 1,
) -> EquivVerdict:
    """Compare ``phi`` and ``psi`` on every structure over ``vocab`` up to size ``max_n``.

    The counterexample is the first disagreement in enumeration order,
    whatever the number of workers.
    """
    vocab = tuple(sorted(set(vocab)))
    for f in (phi, psi):
        L.sort_check(f, vocab)
    opts = opts or EvalOptions()
    checked = 0
    for n in range(1, max_n + 1):
        if workers <= 1:
            bad, count = _check_shard((phi, psi, vocab, n, 0, 1, opts))
            checked += count
            if bad is not None:
                return EquivVerdict(False, _nth_structure(vocab, n, bad), checked)
            continue
        jobs = [(phi, psi, vocab, n, s, workers, opts) for s in range(workers)]
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_check_shard, jobs))
        bad = [i for i, _ in results if i is not None]
        if bad:
            first = min(bad)
            # count structures before the first disagreement in canonical order
            return EquivVerdict(False, _nth_structure(vocab, n, first), checked + first + 1)
        checked += sum(c for _, c in results)
    return EquivVerdict(True, None, checked)


def _nth_structure(vocab, n: int, index: int) -> Structure:
    return next(itertools.islice(enumerate_structures(vocab, n), index, None))
