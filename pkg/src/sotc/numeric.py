"""Numeric predicates over counters.

Each predicate carries a native decision procedure over ``(n, m1, ..., mk)``
and a defining FO(1TC) formula over ``{s, x1, ..., xk}``. The formula is read
on the successor structure ``{0, ..., n}`` with ``s`` the successor relation
and ``xi`` interpreted as ``mi``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from . import logic as L
from .errors import (
    ArityMismatch,
    DuplicateName,
    NotFO1TC,
    RegistrySealed,
    StraySymbol,
    UnknownNumericPredicate,
)
from .structures import Structure

SUCC = L.rel("s", 2)


def arg_var(i: int) -> L.Variable:
    """The i-th (1-based) argument variable of a defining formula."""
    return L.fo(f"x{i}")


@dataclass(frozen=True, eq=False)
class NumericPredicate:
    name: str
    arity: int
    native: Callable[..., bool]
    definition: L.Formula

    def decide(self, n: int, *args: int) -> bool:
        return bool(self.native(n, *args))


class Registry:
    def __init__(self, predicates: Iterable[NumericPredicate] = ()):
        self._preds: dict[str, NumericPredicate] = {}
        self.sealed = False
        for p in predicates:
            self.register(p)

    def register(self, p: NumericPredicate) -> NumericPredicate:
        if self.sealed:
            raise RegistrySealed("registry is sealed")
        if p.name in self._preds:
            raise DuplicateName(f"numeric predicate {p.name!r} already registered")
        tag = L.classify(p.definition)
        if not tag.isFO1TC:
            raise NotFO1TC(f"definition of {p.name!r} is not an FO(1TC) formula")
        allowed = {SUCC} | {arg_var(i) for i in range(1, p.arity + 1)}
        stray = L.free_vars(p.definition) - allowed
        if stray:
            raise StraySymbol(f"definition of {p.name!r} uses {sorted(map(str, stray))}")
        L.sort_check(p.definition, allowed)
        self._preds[p.name] = p
        return p

    def seal(self) -> "Registry":
        self.sealed = True
        return self

    def get(self, name: str) -> NumericPredicate:
        try:
            return self._preds[name]
        except KeyError:
            raise UnknownNumericPredicate(f"unknown numeric predicate @{name}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._preds

    def names(self) -> list[str]:
        return sorted(self._preds)

    def decide(self, name: str, n: int, args) -> bool:
        p = self.get(name)
        if len(args) != p.arity:
            raise ArityMismatch(f"@{name} takes {p.arity} arguments, got {len(args)}")
        return p.decide(n, *args)

    def definition(self, name: str) -> L.Formula:
        return self.get(name).definition

    def __reduce__(self):
        # the shared default registry unpickles to the same object
        if self is DEFAULT_REGISTRY:
            return "DEFAULT_REGISTRY"
        return super().__reduce__()

    def copy(self) -> "Registry":
        r = Registry()
        r._preds = dict(self._preds)
        return r


def successor_structure(n: int, args: Iterable[int] = ()) -> Structure:
    """``B = {0..n}`` with the successor relation and ``xi`` bound to ``args``."""
    succ = frozenset((i, i + 1) for i in range(n))
    interp = {SUCC: succ}
    for i, a in enumerate(args, 1):
        interp[arg_var(i)] = a
    return Structure(n + 1, interp)


# -- defining formulas ------------------------------------------------------------

def _s(a, b):
    return L.Atom(SUCC, (a, b))


def is_zero(x: L.Variable, w: L.Variable = L.fo("w")) -> L.Formula:
    return L.Not(L.Exists(w, _s(w, x)))


def is_max(x: L.Variable, w: L.Variable = L.fo("w")) -> L.Formula:
    return L.Not(L.Exists(w, _s(x, w)))


def instantiate(definition: L.Formula, args) -> L.Formula:
    """The definition with ``x1..xk`` renamed to ``args`` (bound names renamed apart first)."""
    fresh = L.FreshNames(definition, *(L.Eq(a, a) for a in args))
    body = L.rename_bound_apart(definition, fresh)
    return L.substitute(body, {arg_var(i): a for i, a in enumerate(args, 1)})


def plus2_definition() -> L.Formula:
    x1, x2, x3 = arg_var(1), arg_var(2), arg_var(3)
    a, u, v, u2, v2 = L.fo("a"), L.fo("u"), L.fo("v"), L.fo("u'"), L.fo("v'")
    steps = L.TC((u, v), (u2, v2), L.And(_s(u, u2), _s(v, v2)), (a, x2), (x1, x3))
    return L.Exists(a, L.And(is_zero(a), L.Or(L.And(L.Eq(x1, a), L.Eq(x3, x2)), steps)))


def times_definition() -> L.Formula:
    x1, x2, x3 = arg_var(1), arg_var(2), arg_var(3)
    a, i, c, i2, c2 = L.fo("a"), L.fo("i"), L.fo("c"), L.fo("i'"), L.fo("c'")
    add = instantiate(plus2_definition(), (c, x2, c2))
    steps = L.TC((i, c), (i2, c2), L.And(_s(i, i2), add), (a, a), (x1, x3))
    return L.Exists(a, L.And(is_zero(a), L.Or(L.And(L.Eq(x1, a), L.Eq(x3, a)), steps)))


def plus_n_definition(k: int) -> L.Formula:
    """``x1 + ... + xk = x(k+1)``, folding ``plus2`` with existential partial sums."""
    if k < 1:
        raise ValueError("need at least one summand")
    if k == 1:
        return L.Eq(arg_var(1), arg_var(2))
    if k == 2:
        return plus2_definition()
    t = L.fo(f"t{k}")
    head = instantiate(plus2_definition(), (arg_var(1), arg_var(2), t))
    rest_args = (t,) + tuple(arg_var(i) for i in range(3, k + 2))
    rest = instantiate(plus_n_definition(k - 1), rest_args)
    return L.Exists(t, L.And(head, rest))


def modsum_definition() -> L.Formula:
    """``x1 + x2 = x3 (mod n)`` on ``{0..n}``.

    The walk runs on ``{0..n-1}``: its step wraps from ``n-1`` to ``0``, and
    ``n`` itself is read as ``0`` at the start and at the end.
    """
    x1, x2, x3 = arg_var(1), arg_var(2), arg_var(3)
    a, e, r, u, v, u2, v2, w = (L.fo(s) for s in ("a", "e", "r", "u", "v", "u'", "v'", "w"))
    wrap = L.Or(
        L.And(_s(u, u2), L.Not(is_max(u2))),
        L.And(L.Exists(w, L.And(_s(u, w), is_max(w, L.fo("q")))), is_zero(u2)),
    )
    walk = L.TC((u, v), (u2, v2), L.And(wrap, _s(v, v2)), (a, e), (r, x2))
    start = L.Or(L.And(L.Eq(a, x1), L.Not(is_max(x1))), L.And(is_max(x1), L.Eq(a, e)))
    finish = L.Or(L.Eq(r, x3), L.And(is_max(x3), L.Eq(r, e)))
    reach = L.Exists(r, L.And(L.Or(L.And(L.Eq(x2, e), L.Eq(r, a)), walk), finish))
    return L.exists((a, e), L.conj(is_zero(e), start, reach))


def _plus_native(n, *args):
    return sum(args[:-1]) == args[-1]


def _times_native(n, a, b, c):
    return a * b == c


def _modsum_native(n, a, b, c):
    return (a + b) % n == c % n


def builtin_predicates(max_summands: int = 5) -> list[NumericPredicate]:
    preds = [
        NumericPredicate("times", 3, _times_native, times_definition()),
        NumericPredicate("modsum", 3, _modsum_native, modsum_definition()),
    ]
    for k in range(1, max_summands + 1):
        preds.append(NumericPredicate(f"plus{k}", k + 1, _plus_native, plus_n_definition(k)))
    return preds


def default_registry() -> Registry:
    return Registry(builtin_predicates())


DEFAULT_REGISTRY = default_registry().seal()


def decide(name: str, n: int, args, registry: Optional[Registry] = None) -> bool:
    return (registry or DEFAULT_REGISTRY).decide(name, n, tuple(args))


def fo1tc_definition(name: str, registry: Optional[Registry] = None) -> L.Formula:
    return (registry or DEFAULT_REGISTRY).definition(name)
