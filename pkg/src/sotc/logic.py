"""Formula syntax for SO(TC) and its counting extension CMSO(TC).

Formulas are immutable trees. The core grammar is ``Eq``, ``Atom``, ``Not``,
``Or``, ``Exists`` and ``TC`` together with the counting nodes ``CounterCard``
and ``NumAtom``. ``And``, ``Implies``, ``Iff`` and ``Forall`` are sugar;
:func:`normalize` rewrites them into the core.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, fields
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Optional

from .errors import (
    ArityMismatch,
    CaptureDetected,
    SortMismatch,
    TCTuplesNotDisjoint,
    TupleSortMismatch,
    UnboundVariable,
)

FO_KIND = "fo"
SO_KIND = "so"
COUNTER_KIND = "counter"


@dataclass(frozen=True, order=True)
class Sort:
    kind: str
    arity: int = 0

    def __post_init__(self):
        if self.kind not in (FO_KIND, SO_KIND, COUNTER_KIND):
            raise ValueError(f"unknown sort kind {self.kind!r}")
        if self.kind == SO_KIND and self.arity < 1:
            raise ValueError("second-order arity must be at least 1")
        if self.kind != SO_KIND and self.arity != 0:
            raise ValueError("only second-order sorts carry an arity")

    @property
    def is_fo(self) -> bool:
        return self.kind == FO_KIND

    @property
    def is_so(self) -> bool:
        return self.kind == SO_KIND

    @property
    def is_counter(self) -> bool:
        return self.kind == COUNTER_KIND

    def __str__(self):
        if self.is_so:
            return f"so/{self.arity}"
        return self.kind


FIRST_ORDER = Sort(FO_KIND)
COUNTER = Sort(COUNTER_KIND)


def second_order(arity: int) -> Sort:
    return Sort(SO_KIND, arity)


@dataclass(frozen=True, order=True)
class Variable:
    name: str
    sort: Sort

    def __post_init__(self):
        # variables are dictionary keys in every evaluation environment
        object.__setattr__(self, "_h", hash((self.name, self.sort)))

    def __hash__(self):
        return self._h

    def __reduce__(self):
        return (Variable, (self.name, self.sort))

    def __str__(self):
        return f"%{self.name}" if self.sort.is_counter else self.name


def fo(name: str) -> Variable:
    return Variable(name, FIRST_ORDER)


def rel(name: str, arity: int = 1) -> Variable:
    return Variable(name, second_order(arity))


def counter(name: str) -> Variable:
    return Variable(name, COUNTER)


_FIELD_NAMES: dict = {}


class Formula:
    """Base class of formula nodes.

    Nodes are frozen dataclasses; the structural hash is cached on first use
    because formulas are used as dictionary keys throughout the evaluator.
    """

    def _key(self) -> tuple:
        names = _FIELD_NAMES.get(type(self))
        if names is None:
            names = _FIELD_NAMES[type(self)] = tuple(f.name for f in fields(self))
        return tuple(getattr(self, n) for n in names)

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((type(self).__name__,) + self._key())
            object.__setattr__(self, "_hash", h)
        return h

    def __eq__(self, other):
        if self is other:
            return True
        if type(self) is not type(other) or hash(self) != hash(other):
            return False
        return self._key() == other._key()

    def __ne__(self, other):
        return not self == other

    def __getstate__(self):
        # cached hashes depend on the per-process string hash seed
        return {k: v for k, v in self.__dict__.items() if k != "_hash"}

    def children(self) -> tuple["Formula", ...]:
        return ()

    def __str__(self):
        from .text import print_formula

        return print_formula(self)


@dataclass(frozen=True, eq=False)
class Eq(Formula):
    left: Variable
    right: Variable


@dataclass(frozen=True, eq=False)
class Atom(Formula):
    rel: Variable
    args: tuple[Variable, ...]


@dataclass(frozen=True, eq=False)
class Not(Formula):
    body: Formula

    def children(self):
        return (self.body,)


@dataclass(frozen=True, eq=False)
class Or(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, eq=False)
class And(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, eq=False)
class Implies(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, eq=False)
class Iff(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, eq=False)
class Exists(Formula):
    var: Variable
    body: Formula

    def children(self):
        return (self.body,)


@dataclass(frozen=True, eq=False)
class Forall(Formula):
    var: Variable
    body: Formula

    def children(self):
        return (self.body,)


@dataclass(frozen=True, eq=False)
class TC(Formula):
    """``[TC^limit_{left, right} body](args_left, args_right)``."""

    left: tuple[Variable, ...]
    right: tuple[Variable, ...]
    body: Formula
    args_left: tuple[Variable, ...]
    args_right: tuple[Variable, ...]
    limit: Optional[int] = None

    def children(self):
        return (self.body,)

    @property
    def bound(self) -> frozenset[Variable]:
        return frozenset(self.left) | frozenset(self.right)


@dataclass(frozen=True, eq=False)
class CounterCard(Formula):
    """``counter = #{var | body}``."""

    counter: Variable
    var: Variable
    body: Formula

    def children(self):
        return (self.body,)


@dataclass(frozen=True, eq=False)
class NumAtom(Formula):
    pred: str
    args: tuple[Variable, ...]


BINARY = (Or, And, Implies, Iff)
QUANTIFIERS = (Exists, Forall)
SUGAR = (And, Implies, Iff, Forall)


# -- builders ---------------------------------------------------------------

def conj(*parts: Formula) -> Formula:
    if not parts:
        return verum()
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(*parts: Formula) -> Formula:
    if not parts:
        return falsum()
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def exists(variables: Iterable[Variable], body: Formula) -> Formula:
    for v in reversed(list(variables)):
        body = Exists(v, body)
    return body


def forall(variables: Iterable[Variable], body: Formula) -> Formula:
    for v in reversed(list(variables)):
        body = Forall(v, body)
    return body


def neq(x: Variable, y: Variable) -> Formula:
    return Not(Eq(x, y))


def atom(r: Variable, *args: Variable) -> Atom:
    return Atom(r, tuple(args))


def falsum(var: Variable = fo("x")) -> Formula:
    """``E x. x != x``: false on every (nonempty) structure."""
    return Exists(var, neq(var, var))


def verum(var: Variable = fo("x")) -> Formula:
    return Exists(var, Eq(var, var))


def tuple_eq(xs: Iterable[Variable], ys: Iterable[Variable]) -> Formula:
    return conj(*(Eq(x, y) for x, y in zip(xs, ys)))


# -- traversal ----------------------------------------------------------------

def subformulas(phi: Formula) -> Iterator[Formula]:
    stack = [phi]
    while stack:
        f = stack.pop()
        yield f
        stack.extend(reversed(f.children()))


def all_variables(phi: Formula) -> set[Variable]:
    out: set[Variable] = set()
    for f in subformulas(phi):
        if isinstance(f, Eq):
            out.update((f.left, f.right))
        elif isinstance(f, Atom):
            out.add(f.rel)
            out.update(f.args)
        elif isinstance(f, QUANTIFIERS):
            out.add(f.var)
        elif isinstance(f, TC):
            out.update(f.left + f.right + f.args_left + f.args_right)
        elif isinstance(f, CounterCard):
            out.update((f.counter, f.var))
        elif isinstance(f, NumAtom):
            out.update(f.args)
    return out


@lru_cache(maxsize=1 << 16)
def free_vars(phi: Formula) -> frozenset[Variable]:
    if isinstance(phi, Eq):
        return frozenset((phi.left, phi.right))
    if isinstance(phi, Atom):
        return frozenset((phi.rel,) + phi.args)
    if isinstance(phi, NumAtom):
        return frozenset(phi.args)
    if isinstance(phi, Not):
        return free_vars(phi.body)
    if isinstance(phi, BINARY):
        return free_vars(phi.left) | free_vars(phi.right)
    if isinstance(phi, QUANTIFIERS):
        return free_vars(phi.body) - {phi.var}
    if isinstance(phi, TC):
        return (free_vars(phi.body) - phi.bound) | frozenset(phi.args_left + phi.args_right)
    if isinstance(phi, CounterCard):
        return (free_vars(phi.body) - {phi.var}) | {phi.counter}
    raise TypeError(f"not a formula: {phi!r}")


@lru_cache(maxsize=1 << 16)
def normalize(phi: Formula) -> Formula:
    """Rewrite the sugar connectives into ``Not``/``Or``/``Exists``."""
    if isinstance(phi, (Eq, Atom, NumAtom)):
        return phi
    if isinstance(phi, Not):
        return Not(normalize(phi.body))
    if isinstance(phi, Or):
        return Or(normalize(phi.left), normalize(phi.right))
    if isinstance(phi, And):
        return Not(Or(Not(normalize(phi.left)), Not(normalize(phi.right))))
    if isinstance(phi, Implies):
        return Or(Not(normalize(phi.left)), normalize(phi.right))
    if isinstance(phi, Iff):
        return normalize(And(Implies(phi.left, phi.right), Implies(phi.right, phi.left)))
    if isinstance(phi, Exists):
        return Exists(phi.var, normalize(phi.body))
    if isinstance(phi, Forall):
        return Not(Exists(phi.var, Not(normalize(phi.body))))
    if isinstance(phi, TC):
        return TC(phi.left, phi.right, normalize(phi.body), phi.args_left, phi.args_right, phi.limit)
    if isinstance(phi, CounterCard):
        return CounterCard(phi.counter, phi.var, normalize(phi.body))
    raise TypeError(f"not a formula: {phi!r}")


def map_children(phi: Formula, fn) -> Formula:
    """Rebuild ``phi`` with ``fn`` applied to each direct subformula."""
    if isinstance(phi, (Eq, Atom, NumAtom)):
        return phi
    if isinstance(phi, Not):
        return Not(fn(phi.body))
    if isinstance(phi, BINARY):
        return type(phi)(fn(phi.left), fn(phi.right))
    if isinstance(phi, QUANTIFIERS):
        return type(phi)(phi.var, fn(phi.body))
    if isinstance(phi, TC):
        return TC(phi.left, phi.right, fn(phi.body), phi.args_left, phi.args_right, phi.limit)
    if isinstance(phi, CounterCard):
        return CounterCard(phi.counter, phi.var, fn(phi.body))
    raise TypeError(f"not a formula: {phi!r}")


# -- substitution ---------------------------------------------------------------

def substitute(phi: Formula, renaming: Mapping[Variable, Variable]) -> Formula:
    """Whole-symbol renaming ``phi(new/old, ...)``, applied simultaneously.

    Occurrences bound by a binder for the renamed symbol are left alone. A
    renaming that would move a free occurrence under a binder of its target is
    rejected with :class:`CaptureDetected`.
    """
    for old, new in renaming.items():
        if old.sort != new.sort:
            raise SortMismatch(f"cannot rename {old} ({old.sort}) to {new} ({new.sort})")
    ren = {k: v for k, v in renaming.items() if k != v}
    if not ren:
        return phi
    return _subst(phi, ren)


def _under_binder(bound: frozenset[Variable], body: Formula, ren: dict) -> dict:
    inner = {k: v for k, v in ren.items() if k not in bound}
    if inner:
        fv = free_vars(body)
        for k, v in inner.items():
            if v in bound and k in fv:
                raise CaptureDetected(f"renaming {k} to {v} would be captured by a binder of {v}")
    return inner


def _subst(phi: Formula, ren: dict) -> Formula:
    if not ren or not (free_vars(phi) & ren.keys()):
        return phi
    r = lambda v: ren.get(v, v)  # noqa: E731
    if isinstance(phi, Eq):
        return Eq(r(phi.left), r(phi.right))
    if isinstance(phi, Atom):
        return Atom(r(phi.rel), tuple(map(r, phi.args)))
    if isinstance(phi, NumAtom):
        return NumAtom(phi.pred, tuple(map(r, phi.args)))
    if isinstance(phi, Not):
        return Not(_subst(phi.body, ren))
    if isinstance(phi, BINARY):
        return type(phi)(_subst(phi.left, ren), _subst(phi.right, ren))
    if isinstance(phi, QUANTIFIERS):
        inner = _under_binder(frozenset((phi.var,)), phi.body, ren)
        return type(phi)(phi.var, _subst(phi.body, inner))
    if isinstance(phi, TC):
        inner = _under_binder(phi.bound, phi.body, ren)
        return TC(
            phi.left,
            phi.right,
            _subst(phi.body, inner),
            tuple(map(r, phi.args_left)),
            tuple(map(r, phi.args_right)),
            phi.limit,
        )
    if isinstance(phi, CounterCard):
        inner = _under_binder(frozenset((phi.var,)), phi.body, ren)
        return CounterCard(r(phi.counter), phi.var, _subst(phi.body, inner))
    raise TypeError(f"not a formula: {phi!r}")


class FreshNames:
    """Supply of variables in the reserved ``_fresh`` namespace.

    Names already used by the given formulas are skipped, so the supply is
    also safe on formulas that went through a previous transformation.
    """

    def __init__(self, *formulas: Formula, avoid: Iterable[str] = ()):
        self.used: set[str] = set(avoid)
        for f in formulas:
            self.avoid(f)
        self._counter = itertools.count()

    def avoid(self, phi: Formula) -> None:
        self.used.update(v.name for v in all_variables(phi))

    def __call__(self, sort: Sort) -> Variable:
        stem = "_Fresh" if sort.is_so else "_fresh"
        while True:
            name = f"{stem}{next(self._counter)}"
            if name not in self.used:
                self.used.add(name)
                return Variable(name, sort)


def rename_bound_apart(phi: Formula, fresh: FreshNames) -> Formula:
    """Give every bound variable of ``phi`` a fresh name."""
    fresh.avoid(phi)
    return _rename_apart(phi, fresh)


def _rename_apart(phi: Formula, fresh: FreshNames) -> Formula:
    if isinstance(phi, (Eq, Atom, NumAtom)):
        return phi
    if isinstance(phi, QUANTIFIERS):
        v = fresh(phi.var.sort)
        body = substitute(phi.body, {phi.var: v})
        return type(phi)(v, _rename_apart(body, fresh))
    if isinstance(phi, CounterCard):
        v = fresh(phi.var.sort)
        body = substitute(phi.body, {phi.var: v})
        return CounterCard(phi.counter, v, _rename_apart(body, fresh))
    if isinstance(phi, TC):
        ren = {b: fresh(b.sort) for b in phi.left + phi.right}
        body = _rename_apart(substitute(phi.body, ren), fresh)
        return TC(
            tuple(ren[b] for b in phi.left),
            tuple(ren[b] for b in phi.right),
            body,
            phi.args_left,
            phi.args_right,
            phi.limit,
        )
    return map_children(phi, lambda c: _rename_apart(c, fresh))


# -- sort checking ----------------------------------------------------------------

def sort_check(phi: Formula, vocab: Iterable[Variable] = (), registry=None, require_closed: bool = True) -> Formula:
    """Check well-sortedness of ``phi`` and that ``vocab`` is appropriate for it.

    ``registry`` (a numeric predicate registry) enables arity checks of
    numeric atoms. With ``require_closed=False`` the FV check is skipped.
    """
    vocab = set(vocab)
    names: dict[str, Sort] = {}
    for v in itertools.chain(vocab, all_variables(phi)):
        seen = names.setdefault(v.name, v.sort)
        if seen != v.sort:
            raise SortMismatch(f"name {v.name!r} used with sorts {seen} and {v.sort}")
    for f in subformulas(phi):
        _check_node(f, registry)
    if require_closed:
        missing = free_vars(phi) - vocab
        if missing:
            names_ = ", ".join(sorted(str(v) for v in missing))
            raise UnboundVariable(f"free variables not in vocabulary: {names_}")
    return phi


def _check_node(f: Formula, registry) -> None:
    if isinstance(f, Eq):
        if not (f.left.sort.is_fo and f.right.sort.is_fo):
            raise SortMismatch(f"equality between non first-order variables {f.left}, {f.right}")
    elif isinstance(f, Atom):
        if not f.rel.sort.is_so:
            raise SortMismatch(f"{f.rel} used as a relation")
        if f.rel.sort.arity != len(f.args):
            raise ArityMismatch(f"{f.rel.name} has arity {f.rel.sort.arity}, applied to {len(f.args)} arguments")
        for a in f.args:
            if not a.sort.is_fo:
                raise SortMismatch(f"argument {a} of {f.rel.name} is not first-order")
    elif isinstance(f, NumAtom):
        for a in f.args:
            if not a.sort.is_counter:
                raise SortMismatch(f"argument {a} of @{f.pred} is not a counter")
        if registry is not None:
            p = registry.get(f.pred)
            if p.arity != len(f.args):
                raise ArityMismatch(f"@{f.pred} has arity {p.arity}, applied to {len(f.args)} arguments")
    elif isinstance(f, TC):
        n = len(f.left)
        if not (len(f.right) == len(f.args_left) == len(f.args_right) == n) or n == 0:
            raise TupleSortMismatch("TC tuples must be nonempty and of equal length")
        for tup in (f.right, f.args_left, f.args_right):
            for a, b in zip(f.left, tup):
                if a.sort != b.sort:
                    raise TupleSortMismatch(f"TC position sorts differ: {a} ({a.sort}) vs {b} ({b.sort})")
        if len(set(f.left)) != n or len(set(f.right)) != n:
            raise TCTuplesNotDisjoint("TC bound tuples must not repeat variables")
        if set(f.left) & set(f.right):
            raise TCTuplesNotDisjoint("TC bound tuples must be disjoint")
        if f.limit is not None and f.limit < 1:
            raise ValueError("TC limit must be at least 1")
    elif isinstance(f, CounterCard):
        if not f.counter.sort.is_counter:
            raise SortMismatch(f"{f.counter} is not a counter")
        if not f.var.sort.is_fo:
            raise SortMismatch(f"{f.var} is not first-order")


# -- fragments ------------------------------------------------------------------

@dataclass(frozen=True)
class FragmentTag:
    isFO: bool
    isExistsFO: bool
    isMSO: bool
    isMSOTC: bool
    isCMSOTC: bool
    tcBindsOnlySO: bool
    tcBindsOnlyFO: bool
    existsAndTCPositive: bool
    isMonadic2TCForallFO: bool
    hasCounters: bool = False

    @property
    def isFO1TC(self) -> bool:
        """First-order logic with TC operators that bind only element variables."""
        return self.tcBindsOnlyFO and not self.hasCounters and self._no_so_quant

    @property
    def isSO2TCExists(self) -> bool:
        return self.existsAndTCPositive and self.tcBindsOnlySO and not self.hasCounters

    _no_so_quant: bool = True

    @property
    def name(self) -> str:
        """Most specific fragment name, as printed by the CLI."""
        if self.isMonadic2TCForallFO:
            return "monadic-2tc-forall-fo"
        if self.isExistsFO:
            return "exists-fo"
        if self.isFO:
            return "fo"
        if self.isMSO:
            return "mso"
        if self.isFO1TC:
            return "fo-1tc"
        if self.isSO2TCExists:
            return "so-2tc-exists"
        if self.isMSOTC:
            return "mso-tc"
        if self.isCMSOTC:
            return "cmso-tc"
        return "so-tc"

    def flags(self) -> dict[str, bool]:
        out = {f.name: getattr(self, f.name) for f in fields(self) if not f.name.startswith("_")}
        out["isFO1TC"] = self.isFO1TC
        out["isSO2TCExists"] = self.isSO2TCExists
        return out


def classify(phi: Formula) -> FragmentTag:
    core = normalize(phi)
    info = _Scan()
    info.walk(core, True)
    is_fo = not (info.tc or info.so_quant or info.counters)
    monadic = info.quant_monadic
    body_universal = False
    if isinstance(core, TC):
        tuples = core.left + core.right + core.args_left + core.args_right
        if all(v.sort == second_order(1) for v in tuples):
            inner = _Scan()
            inner.walk(core.body, True)
            body_universal = (
                not (inner.tc or inner.so_quant or inner.counters) and not inner.exists_pos
            )
    return FragmentTag(
        isFO=is_fo,
        isExistsFO=is_fo and not info.exists_neg,
        isMSO=not info.tc and not info.counters and monadic,
        isMSOTC=not info.counters and monadic,
        isCMSOTC=monadic,
        tcBindsOnlySO=info.tc_only_so,
        tcBindsOnlyFO=info.tc_only_fo,
        existsAndTCPositive=not info.exists_neg and not info.tc_neg,
        isMonadic2TCForallFO=body_universal,
        hasCounters=info.counters,
        _no_so_quant=not info.so_quant,
    )


class _Scan:
    def __init__(self):
        self.tc = False
        self.so_quant = False
        self.counters = False
        self.quant_monadic = True
        self.tc_only_so = True
        self.tc_only_fo = True
        self.exists_pos = False
        self.exists_neg = False
        self.tc_neg = False

    def walk(self, f: Formula, positive: bool) -> None:
        if isinstance(f, Not):
            self.walk(f.body, not positive)
            return
        if isinstance(f, Exists):
            if positive:
                self.exists_pos = True
            else:
                self.exists_neg = True
            s = f.var.sort
            if s.is_so:
                self.so_quant = True
                if s.arity != 1:
                    self.quant_monadic = False
            elif s.is_counter:
                self.counters = True
        elif isinstance(f, TC):
            self.tc = True
            if not positive:
                self.tc_neg = True
            sorts = [v.sort for v in f.left]
            if not all(s.is_so for s in sorts):
                self.tc_only_so = False
            if not all(s.is_fo for s in sorts):
                self.tc_only_fo = False
            for s in sorts:
                if s.is_so and s.arity != 1:
                    self.quant_monadic = False
                if s.is_counter:
                    self.counters = True
        elif isinstance(f, (CounterCard, NumAtom)):
            self.counters = True
        for c in f.children():
            self.walk(c, positive)
