"""Formula corpora for tests and experiments, and a random formula generator."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

from . import logic as L
from .numeric import DEFAULT_REGISTRY, Registry
from .text import parse_formula

# Counting formulas; together they exercise every case of counter
# elimination: equality, relation atoms, numeric atoms, counting terms,
# negation, disjunction, FO/SO/counter quantifiers and TC over mixed tuples.
CMSO_CORPUS = [
    "%k = #{ x | P(x) }",
    "!(%k = #{ x | P(x) & !Q(x) })",
    "E x. (P(x) & !Q(x)) | @times(%k, %k, %k)",
    "E %m. (%m = #{ x | P(x) } & @plus2(%m, %m, %k))",
    "A %m. (@modsum(%m, %k, %m) | %m = #{ x | Q(x) })",
    "E X. (A x. (X(x) -> P(x)) & %k = #{ y | X(y) & y != z })",
    "E x. (Q(x) & %k = #{ y | R(x, y) })",
    "@times(%k, %k, %j) | @plus3(%j, %j, %j, %k)",
    "E %m. (%m = #{ x | P(x) } & [TC{%a ; %b} @plus2(%a, %m, %b)](%m ; %k))",
    "[TC{X, %a ; Y, %b} (E z. (!X(z) & A w. (Y(w) <-> X(w) | w = z)) & %b = #{ x | Y(x) })](P, %j ; Q, %k)",
    "[TC{x, %a ; y, %b} (R(x, y) & @plus1(%a, %b))](z, %j ; z, %k)",
]

# Existential SO(2TC) formulas with monadic relation variables.
COLLAPSE_CORPUS = [
    "E X. ([TC{X ; Y} E x. (Y(x) & !X(x))](X ; R) & E y. X(y))",
    "[TC{X ; Y} E x. E y. (X(x) & Y(y) & !X(y) & !Y(x))](R ; P)",
    "E X. E Y. (E x. (X(x) & !Y(x)) & [TC{X ; Z} E x. (X(x) & !Z(x) & R(x))](X ; Y))",
    "[TC{X ; Y} E x. (X(x) & !Y(x) & P(x))](R ; P)",
    "[TC{X, W ; Y, V} E x. (X(x) & V(x) & !W(x) & !Y(x))](R, P ; P, R)",
    "E X. ([TC^2{X ; Y} E x. (X(x) & Y(x) & R(x))](P ; X) & E x. (X(x) & !P(x)))",
    "E x. (R(x) & [TC{X ; Y} E y. (!X(y) & Y(y) & y != x)](P ; R))",
    "[TC{X ; Y} E x. (Y(x) & !X(x) & [TC^2{Z ; W} E y. (W(y) & !Z(y) & X(y))](X ; Y))](P ; R)",
    "E X. (E x. X(x) & [TC{Y ; Z} E x. E y. (Y(x) & Z(y) & x != y & P(y))](X ; R))",
    "E X. E Y. (E x. (X(x) & Y(x)) | [TC{Z ; W} E x. (Z(x) & !W(x))](X ; Y)) & E z. (R(z) & !X(z))",
]

# Miscellaneous formulas for parser and printer checks.
GENERAL_CORPUS = [
    "x = y",
    "x != y",
    "E(x, y) -> E(y, x)",
    "A x. E y. (E(x, y) & !E(y, x))",
    "E X. A x. (X(x) <-> !P(x))",
    "[TC{x ; y} E(x, y)](u ; v)",
    "[TC^3{x, y ; u, v} (E(x, u) & E(y, v))](a, b ; c, d)",
    "E R2. A x. A y. (R2(x, y) -> R2(y, x))",
    "%k = #{ x | E(x, x) }",
    "@plus2(%a, %b, %c) <-> @plus2(%b, %a, %c)",
    "!!(x = x) | !(y != y)",
    "(P(x) -> Q(x)) -> P(x) -> Q(x)",
    "s(x, y) & !s(y, x)",
]


def parsed(corpus: list[str]) -> list[L.Formula]:
    return [parse_formula(src) for src in corpus]


@dataclass
class RandomFormulaConfig:
    max_depth: int = 4
    fo_names: tuple = ("x", "y", "z")
    so_names: tuple = ("P", "Q")
    binary_names: tuple = ("E",)
    counter_names: tuple = ("k", "m")
    numeric: tuple = ("plus2", "times")
    tc_weight: float = 0.12
    registry: Registry = field(default=DEFAULT_REGISTRY, repr=False)


class RandomFormulas:
    """Random sort-correct formulas; free variables come from the config names."""

    def __init__(self, seed: int = 0, config: Optional[RandomFormulaConfig] = None):
        self.rng = random.Random(seed)
        self.cfg = config or RandomFormulaConfig()
        self.counter = 0

    def _new(self, stem: str, sort: L.Sort) -> L.Variable:
        self.counter += 1
        return L.Variable(f"{stem}{self.counter}", sort)

    def formula(self) -> L.Formula:
        cfg = self.cfg
        scope = {
            "fo": [L.fo(n) for n in cfg.fo_names],
            "mono": [L.rel(n) for n in cfg.so_names],
            "bin": [L.rel(n, 2) for n in cfg.binary_names],
            "ctr": [L.counter(n) for n in cfg.counter_names],
        }
        return self._gen(cfg.max_depth, scope)

    def _atomic(self, scope) -> L.Formula:
        r = self.rng
        fo = scope["fo"]
        kind = r.choice(["eq", "mono", "bin", "num"] if scope["ctr"] else ["eq", "mono", "bin"])
        if kind == "eq":
            return L.Eq(r.choice(fo), r.choice(fo))
        if kind == "mono":
            return L.atom(r.choice(scope["mono"]), r.choice(fo))
        if kind == "bin" and scope["bin"]:
            return L.atom(r.choice(scope["bin"]), r.choice(fo), r.choice(fo))
        if kind == "num":
            name = r.choice(self.cfg.numeric)
            k = self.cfg.registry.get(name).arity
            return L.NumAtom(name, tuple(r.choice(scope["ctr"]) for _ in range(k)))
        return L.Eq(r.choice(fo), r.choice(fo))

    def _gen(self, depth: int, scope) -> L.Formula:
        r = self.rng
        if depth <= 0:
            return self._atomic(scope)
        roll = r.random()
        if roll < 0.2:
            return self._atomic(scope)
        if roll < 0.3:
            return L.Not(self._gen(depth - 1, scope))
        if roll < 0.55:
            op = r.choice([L.Or, L.And, L.Implies, L.Iff])
            return op(self._gen(depth - 1, scope), self._gen(depth - 1, scope))
        if roll < 0.8:
            q = r.choice([L.Exists, L.Forall])
            which = r.choice(["fo", "fo", "mono", "ctr"])
            stem = {"fo": "v", "mono": "V", "ctr": "c"}[which]
            sort = {"fo": L.FIRST_ORDER, "mono": L.second_order(1), "ctr": L.COUNTER}[which]
            v = self._new(stem, sort)
            inner = dict(scope)
            inner[which] = scope[which] + [v]
            return q(v, self._gen(depth - 1, inner))
        if roll < 0.8 + self.cfg.tc_weight:
            return self._tc(depth, scope)
        if scope["ctr"]:
            v = self._new("w", L.FIRST_ORDER)
            inner = dict(scope)
            inner["fo"] = scope["fo"] + [v]
            return L.CounterCard(r.choice(scope["ctr"]), v, self._gen(depth - 1, inner))
        return self._atomic(scope)

    def _tc(self, depth: int, scope) -> L.Formula:
        r = self.rng
        which = r.choice(["fo", "mono"])
        width = r.choice([1, 1, 2])
        sort = L.FIRST_ORDER if which == "fo" else L.second_order(1)
        stem = "t" if which == "fo" else "T"
        left = tuple(self._new(stem, sort) for _ in range(width))
        right = tuple(self._new(stem, sort) for _ in range(width))
        inner = dict(scope)
        inner[which] = scope[which] + list(left + right)
        body = self._gen(depth - 1, inner)
        al = tuple(r.choice(scope[which]) for _ in range(width))
        ar = tuple(r.choice(scope[which]) for _ in range(width))
        limit = r.choice([None, None, 1, 2, 3])
        return L.TC(left, right, body, al, ar, limit)


def random_formulas(count: int, seed: int = 0, config: Optional[RandomFormulaConfig] = None) -> list[L.Formula]:
    gen = RandomFormulas(seed, config)
    return [gen.formula() for _ in range(count)]
