"""Finite structures over the canonical domain ``{0, ..., n-1}``."""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

from .errors import (
    ArityMismatch,
    CounterOutOfRange,
    DomainEmpty,
    ElementOutOfRange,
    NotUnaryVocabulary,
    SortMismatch,
)
from .logic import Sort, Variable

# element (int) | relation (frozenset of int tuples) | counter value (int)
Value = Union[int, frozenset]


def check_value(var: Variable, value, n: int) -> Value:
    """Validate ``value`` for ``var`` on a domain of size ``n``; return it normalized."""
    s = var.sort
    if s.is_so:
        if isinstance(value, (int, bool)):
            raise SortMismatch(f"{var} needs a relation, got {value!r}")
        rel = frozenset(tuple(t) for t in value)
        for t in rel:
            if len(t) != s.arity:
                raise ArityMismatch(f"tuple {t} in {var} has width {len(t)}, expected {s.arity}")
            for e in t:
                if not isinstance(e, int) or not 0 <= e < n:
                    raise ElementOutOfRange(f"element {e!r} in {var} is outside 0..{n - 1}")
        return rel
    if not isinstance(value, int) or isinstance(value, bool):
        raise SortMismatch(f"{var} needs an integer, got {value!r}")
    if s.is_counter:
        if not 0 <= value <= n:
            raise CounterOutOfRange(f"counter {var} = {value} is outside 0..{n}")
    elif not 0 <= value < n:
        raise ElementOutOfRange(f"element {var} = {value} is outside 0..{n - 1}")
    return value


class Structure:
    """An immutable finite structure ``(A, I)`` with ``A = {0, ..., n-1}``."""

    __slots__ = ("domain_size", "interp", "_hash")

    def __init__(self, domain_size: int, interp: Optional[Mapping[Variable, Value]] = None):
        if not isinstance(domain_size, int) or domain_size < 1:
            raise DomainEmpty(f"domain must be nonempty, got size {domain_size!r}")
        checked = {v: check_value(v, val, domain_size) for v, val in (interp or {}).items()}
        object.__setattr__(self, "domain_size", domain_size)
        object.__setattr__(self, "interp", checked)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, key, value):
        raise AttributeError("Structure is immutable")

    @classmethod
    def _trusted(cls, n: int, interp: dict) -> "Structure":
        s = object.__new__(cls)
        object.__setattr__(s, "domain_size", n)
        object.__setattr__(s, "interp", interp)
        object.__setattr__(s, "_hash", None)
        return s

    @property
    def vocabulary(self) -> frozenset[Variable]:
        return frozenset(self.interp)

    def __getitem__(self, var: Variable) -> Value:
        return self.interp[var]

    def __contains__(self, var: Variable) -> bool:
        return var in self.interp

    def __eq__(self, other):
        return (
            isinstance(other, Structure)
            and self.domain_size == other.domain_size
            and self.interp == other.interp
        )

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.domain_size, frozenset(self.interp.items()))))
        return self._hash

    def __repr__(self):
        parts = []
        for v in sorted(self.interp):
            val = self.interp[v]
            if isinstance(val, frozenset):
                val = sorted(val)
                if v.sort.arity == 1:
                    val = [t[0] for t in val]
            parts.append(f"{v}={val}")
        return f"Structure(n={self.domain_size}, {', '.join(parts)})"

    def with_updates(self, bindings: Iterable[tuple[Variable, Value]]) -> "Structure":
        """Return ``A[R1/X1, ...]``; variables outside the vocabulary extend it."""
        interp = dict(self.interp)
        for var, val in bindings:
            interp[var] = check_value(var, val, self.domain_size)
        return Structure._trusted(self.domain_size, interp)

    def restrict(self, vocab: Iterable[Variable]) -> "Structure":
        vocab = set(vocab)
        return Structure._trusted(self.domain_size, {v: x for v, x in self.interp.items() if v in vocab})


def with_updates(a: Structure, bindings: Iterable[tuple[Variable, Value]]) -> Structure:
    return a.with_updates(bindings)


@lru_cache(maxsize=256)
def all_tuples(n: int, arity: int) -> tuple[tuple[int, ...], ...]:
    return tuple(itertools.product(range(n), repeat=arity))


@lru_cache(maxsize=256)
def enumerate_values(sort: Sort, n: int) -> tuple[Value, ...]:
    """All values of ``sort`` on a domain of size ``n``.

    Relations are listed in bitmask order over the lexicographically sorted
    tuples of ``A^k``: the value with index ``m`` contains tuple ``i`` iff bit
    ``i`` of ``m`` is set.
    """
    if n < 1:
        raise DomainEmpty("domain size must be positive")
    if sort.is_fo:
        return tuple(range(n))
    if sort.is_counter:
        return tuple(range(n + 1))
    tuples = all_tuples(n, sort.arity)
    if len(tuples) > 20:
        raise OverflowError(f"2^{len(tuples)} relations of arity {sort.arity} on {n} elements")
    return tuple(
        frozenset(t for i, t in enumerate(tuples) if mask >> i & 1)
        for mask in range(1 << len(tuples))
    )


def count_values(sort: Sort, n: int) -> int:
    if sort.is_fo:
        return n
    if sort.is_counter:
        return n + 1
    return 2 ** (n ** sort.arity)


def enumerate_structures(vocab: Iterable[Variable], n: int) -> Iterator[Structure]:
    """Every interpretation of ``vocab`` on ``{0..n-1}``, each exactly once.

    The order is the product order over the vocabulary sorted by
    ``(name, sort)``, with each variable's values in :func:`enumerate_values`
    order; the last variable varies fastest.
    """
    vs = sorted(set(vocab))
    for combo in itertools.product(*(enumerate_values(v.sort, n) for v in vs)):
        yield Structure._trusted(n, dict(zip(vs, combo)))


def unary_variables(a: Structure) -> list[Variable]:
    vs = sorted(a.interp, key=lambda v: v.name)
    for v in vs:
        if not (v.sort.is_so and v.sort.arity == 1):
            raise NotUnaryVocabulary(f"{v} ({v.sort}) is not a monadic relation variable")
    return vs


def parikh_vector(a: Structure, variables: Optional[Sequence[Variable]] = None) -> tuple[int, ...]:
    """Cell sizes of the Boolean combinations of ``variables``.

    Cell ``i`` holds the elements that belong to ``variables[j]`` exactly for
    the bits ``j`` set in ``i``. Without an explicit order the vocabulary of
    ``a`` is used, sorted by name.
    """
    if variables is None:
        variables = unary_variables(a)
    for v in variables:
        if not (v.sort.is_so and v.sort.arity == 1):
            raise NotUnaryVocabulary(f"{v} ({v.sort}) is not a monadic relation variable")
    cells = [0] * (1 << len(variables))
    for e in range(a.domain_size):
        idx = 0
        for j, v in enumerate(variables):
            if (e,) in a.interp[v]:
                idx |= 1 << j
        cells[idx] += 1
    return tuple(cells)


def structure_from_cells(cells: Sequence[int], variables: Sequence[Variable]) -> Structure:
    """A unary structure whose Parikh vector is ``cells`` (elements filled in cell order)."""
    if len(cells) != 1 << len(variables):
        raise ValueError("need 2^k cells for k variables")
    n = sum(cells)
    members: dict[Variable, set] = {v: set() for v in variables}
    e = 0
    for idx, size in enumerate(cells):
        for _ in range(size):
            for j, v in enumerate(variables):
                if idx >> j & 1:
                    members[v].add((e,))
            e += 1
    return Structure(n, {v: frozenset(m) for v, m in members.items()})
