"""Model checking ``A |= phi`` for SO(TC) and CMSO(TC).

Formulas are normalized to the core grammar and compiled once into Python
closures over a mutable environment. Compiled formulas are cached, and each
carries memo tables for its expensive subformulas (second-order and counter
quantifiers, anything containing a TC operator, nested quantifier blocks).
A memo key holds the domain size and the values of every free variable of the
subformula, so entries stay valid across structures.

TC reachability runs forward breadth-first search over tuples of values by
default, or the recursive midpoint (Savitch) search that keeps no visited set.
BFS successors are generated per connected group of conjuncts of the body, so
independent positions of the target tuple are enumerated separately.

Symmetry reduction: when every free variable of a node is an element, a
counter or a monadic relation, the node's truth value is invariant under
permutations of the domain that preserve the "colour" of each element (its
memberships and equalities with those variables). Such nodes use colour
multisets as memo keys, quantify over one representative per orbit, and run
BFS over canonical representatives of states.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

from . import logic as L
from .errors import StateCapExceeded, UnboundVariable
from .numeric import DEFAULT_REGISTRY, Registry
from .structures import Structure, count_values, enumerate_values

BFS = "bfs"
SAVITCH = "savitch"

_MISSING = object()
_MEMO_LIMIT = 500_000


@dataclass
class EvalOptions:
    tc_strategy: str = BFS
    collect_stats: bool = False
    max_states: Optional[int] = None
    registry: Registry = field(default=DEFAULT_REGISTRY, repr=False)
    symmetry: bool = True

    def __post_init__(self):
        if self.tc_strategy not in (BFS, SAVITCH):
            raise ValueError(f"unknown TC strategy {self.tc_strategy!r}")
        if self.max_states is not None and self.max_states < 1:
            raise ValueError("max_states must be at least 1")


@dataclass
class EvalReport:
    result: bool
    states_explored: int = 0
    tc_calls: int = 0
    max_frontier: int = 0

    def __bool__(self):
        return self.result

    def as_dict(self) -> dict:
        return {
            "result": self.result,
            "states_explored": self.states_explored,
            "tc_calls": self.tc_calls,
            "max_frontier": self.max_frontier,
        }


class _Run:
    """Per-call state threaded through compiled closures."""

    __slots__ = ("n", "registry", "max_states", "report")

    def __init__(self, n: int, opts: EvalOptions):
        self.n = n
        self.registry = opts.registry
        self.max_states = opts.max_states
        self.report = EvalReport(False)


Compiled = Callable[[dict, _Run], bool]


def state_space_size(tc: L.TC, n: int) -> int:
    """Number of candidate states of a TC node on a domain of size ``n``."""
    size = 1
    for v in tc.left:
        size *= count_values(v.sort, n)
    return size


def _expensive(f: L.Formula) -> bool:
    for g in L.subformulas(f):
        if isinstance(g, (L.TC, L.CounterCard, L.NumAtom)):
            return True
        if isinstance(g, L.Exists) and not g.var.sort.is_fo:
            return True
    return False


def _has_quantifier(f: L.Formula) -> bool:
    return any(isinstance(g, (L.Exists, L.CounterCard)) for g in L.subformulas(f))


def _conjuncts(f: L.Formula) -> list[L.Formula]:
    """Split a core formula at ``!(a | b)`` = ``!a & !b``."""
    if isinstance(f, L.Not) and isinstance(f.body, L.Or):
        out = []
        for part in (f.body.left, f.body.right):
            out.extend(_conjuncts(part.body if isinstance(part, L.Not) else L.Not(part)))
        return out
    if isinstance(f, L.Not) and isinstance(f.body, L.Not):
        return _conjuncts(f.body.body)
    return [f]


def _is_plain(v: L.Variable) -> bool:
    """Values of ``v`` are moved around by domain permutations in a colour-friendly way."""
    return v.sort.is_fo or v.sort.is_counter or v.sort.arity == 1


def _split(variables) -> tuple[tuple, tuple, tuple]:
    vs = sorted(variables)
    mono = tuple(v for v in vs if v.sort.is_so)
    fos = tuple(v for v in vs if v.sort.is_fo)
    counters = tuple(v for v in vs if v.sort.is_counter)
    return mono, fos, counters


_BITS: dict = {}


def _bits(rel: frozenset) -> int:
    """Members of a monadic relation as an int bit set (cached)."""
    b = _BITS.get(rel)
    if b is None:
        b = 0
        for (e,) in rel:
            b |= 1 << e
        if len(_BITS) > 200_000:
            _BITS.clear()
        _BITS[rel] = b
    return b


def _regions(n: int, env: dict, mono, fos) -> list[tuple[int, int]]:
    """Nonempty colour classes as ``(colour, element bit set)``, sorted by colour."""
    regions = [(0, (1 << n) - 1)]
    bit = 1
    for b in [_bits(env[v]) for v in mono] + [1 << env[v] for v in fos]:
        out = []
        for col, r in regions:
            inside = r & b
            if inside:
                out.append((col | bit, inside))
            if r ^ inside:
                out.append((col, r ^ inside))
        regions = out
        bit <<= 1
    regions.sort()
    return regions


@lru_cache(maxsize=1 << 14)
def _elements(bits: int) -> list[int]:
    out, e = [], 0
    while bits:
        if bits & 1:
            out.append(e)
        bits >>= 1
        e += 1
    return out


def _class_list(n: int, env: dict, mono, fos) -> list[list[int]]:
    return [_elements(r) for _, r in _regions(n, env, mono, fos)]


def _refine(classes: list[list[int]], sort: L.Sort, value) -> list[list[int]]:
    if sort.is_counter:
        return classes
    if sort.is_fo:
        inside = lambda e: e == value  # noqa: E731
    else:
        inside = lambda e: (e,) in value  # noqa: E731
    out = []
    for c in classes:
        a = [e for e in c if inside(e)]
        b = [e for e in c if not inside(e)]
        if a:
            out.append(a)
        if b:
            out.append(b)
    return out


_REPS: dict = {}


def _representatives(sort: L.Sort, classes: list[list[int]], n: int):
    """One value of ``sort`` per orbit of the colour-preserving permutations."""
    if sort.is_counter:
        return range(n + 1)
    if sort.is_fo:
        return [c[0] for c in classes]
    key = tuple(map(tuple, classes))
    reps = _REPS.get(key)
    if reps is None:
        reps = [
            frozenset((e,) for c, k in zip(classes, counts) for e in c[:k])
            for counts in itertools.product(*(range(len(c) + 1) for c in classes))
        ]
        if len(_REPS) > 4096:
            _REPS.clear()
        _REPS[key] = reps
    return reps


def _bounded_splits(total: int, sizes: list[int]):
    """Tuples of counts, each within its size, summing to ``total``."""
    if not sizes:
        if total == 0:
            yield ()
        return
    rest = sum(sizes[1:])
    for k in range(max(0, total - rest), min(sizes[0], total) + 1):
        for tail in _bounded_splits(total - k, sizes[1:]):
            yield (k,) + tail


def _split_orbits(sort: L.Sort, values, coarse, fine, parent):
    """Orbit representatives under ``fine`` of values given up to ``coarse``.

    ``fine`` refines ``coarse``; every value is a representative under the
    coarse colouring and is expanded into the distinct fine orbits it covers.
    """
    if sort.is_counter:
        return values
    children: list[list[list[int]]] = [[] for _ in coarse]
    for c in fine:
        children[parent[c[0]]].append(c)
    if sort.is_fo:
        return [c[0] for v in values for c in children[parent[v]]]
    out = []
    for v in values:
        per = []
        for j, c in enumerate(coarse):
            k = sum(1 for e in c if (e,) in v)
            subs = children[j]
            per.append([
                [e for sub, m in zip(subs, split) for e in sub[:m]]
                for split in _bounded_splits(k, [len(sub) for sub in subs])
            ])
        for combo in itertools.product(*per):
            out.append(frozenset((e,) for part in combo for e in part))
    return out


def _core_conj(parts: list[L.Formula]) -> L.Formula:
    out = parts[0]
    for p in parts[1:]:
        out = L.Not(L.Or(L.Not(out), L.Not(p)))
    return out


def _cost(f: L.Formula) -> tuple:
    return (_expensive(f), _has_quantifier(f), sum(1 for _ in L.subformulas(f)))


def _push_exists(v: L.Variable, body: L.Formula) -> L.Formula:
    if v not in L.free_vars(body):
        return body
    if isinstance(body, L.Or):
        return L.Or(_push_exists(v, body.left), _push_exists(v, body.right))
    parts = _conjuncts(body)
    if len(parts) > 1:
        with_v = sorted((p for p in parts if v in L.free_vars(p)), key=_cost)
        without = [p for p in parts if v not in L.free_vars(p)]
        if without:
            return _core_conj(sorted(without, key=_cost) + [_push_exists(v, _core_conj(with_v))])
        return L.Exists(v, _core_conj(with_v))
    return L.Exists(v, body)


def miniscope_core(f: L.Formula) -> L.Formula:
    """Move quantifiers of a core formula inward and order conjuncts cheapest first."""
    if isinstance(f, L.Exists):
        return _push_exists(f.var, miniscope_core(f.body))
    return L.map_children(f, miniscope_core)


# Memoized subformulas compiled under the default registry, shared between
# formulas so that common parts (lifted predicates, say) share memo tables.
_SHARED: dict = {}
_SHARED_LIMIT = 20_000


class _Compiler:
    def __init__(self, strategy: str, symmetry: bool = True, shared: bool = True):
        self.strategy = strategy
        self.symmetry = symmetry
        self.shared = shared

    def _symmetric(self, variables) -> bool:
        return self.symmetry and all(_is_plain(v) for v in variables)

    def compile(self, f: L.Formula) -> Compiled:
        memo = isinstance(f, L.TC) or (
            isinstance(f, (L.Exists, L.CounterCard)) and (_expensive(f) or _has_quantifier(f.body))
        )
        if memo and self.shared:
            key = (f, self.strategy, self.symmetry)
            fn = _SHARED.get(key)
            if fn is not None:
                return fn
        fn = self._compile(f)
        if memo:
            fn = self._memoize(f, fn)
            if self.shared:
                if len(_SHARED) > _SHARED_LIMIT:
                    _SHARED.clear()
                _SHARED[key] = fn
        return fn

    def _memoize(self, f: L.Formula, fn: Compiled) -> Compiled:
        fv = tuple(sorted(L.free_vars(f)))
        memo: dict = {}
        if self._symmetric(fv):
            mono, fos, counters = _split(fv)

            def key_of(env, run):
                regions = _regions(run.n, env, mono, fos)
                return (run.n, tuple([env[c] for c in counters]), tuple([(c, r.bit_count()) for c, r in regions]))

        else:

            def key_of(env, run):
                return (run.n,) + tuple([env[v] for v in fv])

        def memoized(env, run):
            key = key_of(env, run)
            r = memo.get(key)
            if r is None:
                r = fn(env, run)
                if len(memo) > _MEMO_LIMIT:
                    memo.clear()
                memo[key] = r
            return r

        if not self._symmetric(fv):
            return memoized
        raw: dict = {}

        def memoized_raw(env, run):
            # exact values first: cheaper to hash than a colour multiset
            key = (run.n,) + tuple([env[v] for v in fv])
            r = raw.get(key)
            if r is None:
                r = memoized(env, run)
                if len(raw) > _MEMO_LIMIT:
                    raw.clear()
                raw[key] = r
            return r

        return memoized_raw

    def _compile(self, f: L.Formula) -> Compiled:
        if isinstance(f, L.Eq):
            x, y = f.left, f.right
            return lambda env, run: env[x] == env[y]
        if isinstance(f, L.Atom):
            r, args = f.rel, f.args
            if len(args) == 1:
                a = args[0]
                return lambda env, run: (env[a],) in env[r]
            return lambda env, run: tuple([env[a] for a in args]) in env[r]
        if isinstance(f, L.NumAtom):
            p, args = f.pred, f.args

            def num(env, run):
                return run.registry.decide(p, run.n, tuple([env[a] for a in args]))

            return num
        if isinstance(f, L.Not):
            if isinstance(f.body, L.Not):
                return self.compile(f.body.body)
            body = self.compile(f.body)
            return lambda env, run: not body(env, run)
        if isinstance(f, L.Or):
            left, right = self.compile(f.left), self.compile(f.right)
            return lambda env, run: left(env, run) or right(env, run)
        if isinstance(f, L.Exists):
            return self._exists(f)
        if isinstance(f, L.CounterCard):
            return self._card(f)
        if isinstance(f, L.TC):
            return self._tc(f)
        raise TypeError(f"not a core formula node: {type(f).__name__}")

    def _exists(self, f: L.Exists) -> Compiled:
        v, sort = f.var, f.var.sort
        body = self.compile(f.body)
        fv = L.free_vars(f)
        if self._symmetric(fv | {v}):
            mono, fos, _ = _split(fv)

            def values(env, run):
                return _representatives(sort, _class_list(run.n, env, mono, fos), run.n)

        else:

            def values(env, run):
                return enumerate_values(sort, run.n)

        def ex(env, run):
            old = env.get(v, _MISSING)
            try:
                for val in values(env, run):
                    env[v] = val
                    if body(env, run):
                        return True
                return False
            finally:
                if old is _MISSING:
                    del env[v]
                else:
                    env[v] = old

        return ex

    def _card(self, f: L.CounterCard) -> Compiled:
        mu, x = f.counter, f.var
        body = self.compile(f.body)
        fv = L.free_vars(f)
        if self._symmetric(fv):
            mono, fos, _ = _split(fv)

            def weighted(env, run):
                return [(c[0], len(c)) for c in _class_list(run.n, env, mono, fos)]

        else:

            def weighted(env, run):
                return [(a, 1) for a in range(run.n)]

        def card(env, run):
            old = env.get(x, _MISSING)
            try:
                count = 0
                for a, weight in weighted(env, run):
                    env[x] = a
                    if body(env, run):
                        count += weight
                return count == env[mu]
            finally:
                if old is _MISSING:
                    del env[x]
                else:
                    env[x] = old

        return card

    def _tc(self, f: L.TC) -> Compiled:
        left, right = f.left, f.right
        al, ar, limit = f.args_left, f.args_right, f.limit
        sorts = tuple(v.sort for v in left)
        params = tuple(sorted(L.free_vars(f.body) - f.bound))
        bound = left + right
        width = len(left)

        if self.strategy == SAVITCH:
            body = self.compile(f.body)

            def savitch_tc(env, run):
                start = tuple([env[a] for a in al])
                target = tuple([env[a] for a in ar])
                saved = [env.get(v, _MISSING) for v in bound]
                try:
                    return _savitch(env, run, body, left, right, sorts, start, target, limit)
                finally:
                    _restore(env, bound, saved)

            return savitch_tc

        # BFS: successors grouped by connected components of the conjuncts
        parts = _conjuncts(f.body)
        rpos = {v: i for i, v in enumerate(right)}
        guards, groups = [], []
        parent = list(range(width))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        touched = []
        for part in parts:
            pos = sorted(rpos[v] for v in L.free_vars(part) if v in rpos)
            touched.append(pos)
            for a, b in zip(pos, pos[1:]):
                parent[find(a)] = find(b)
        comp: dict[int, tuple[list[int], list]] = {}
        for i in range(width):
            comp.setdefault(find(i), ([], []))[0].append(i)
        for part, pos in zip(parts, touched):
            if pos:
                comp[find(pos[0])][1].append(self.compile(part))
            else:
                guards.append(self.compile(part))
        for positions, checks in comp.values():
            groups.append((tuple(positions), tuple(right[i] for i in positions), tuple(checks)))

        if self._symmetric(L.free_vars(f) | f.bound):
            return _symmetric_bfs(f, params, guards, groups)

        succ_cache: dict = {}

        def successors(env, run, table, state):
            out = table.get(state)
            if out is not None:
                return out
            rep = run.report
            rep.states_explored += 1
            if run.max_states is not None and rep.states_explored > run.max_states:
                raise StateCapExceeded(f"explored more than {run.max_states} TC states")
            for v, val in zip(left, state):
                env[v] = val
            out = ()
            if all(g(env, run) for g in guards):
                options = []
                for positions, rvars, checks in groups:
                    sols = []
                    for combo in itertools.product(*(enumerate_values(sorts[i], run.n) for i in positions)):
                        for v, val in zip(rvars, combo):
                            env[v] = val
                        if all(c(env, run) for c in checks):
                            sols.append(combo)
                    if not sols:
                        options = None
                        break
                    options.append((positions, sols))
                if options is not None:
                    succs = []
                    for pick in itertools.product(*(sols for _, sols in options)):
                        st = [None] * width
                        for (positions, _), combo in zip(options, pick):
                            for i, val in zip(positions, combo):
                                st[i] = val
                        succs.append(tuple(st))
                    out = tuple(succs)
            table[state] = out
            return out

        def bfs_tc(env, run):
            rep = run.report
            rep.tc_calls += 1
            start = tuple([env[a] for a in al])
            target = tuple([env[a] for a in ar])
            key = (run.n,) + tuple([env[p] for p in params])
            table = succ_cache.get(key)
            if table is None:
                if len(succ_cache) > 4096:
                    succ_cache.clear()
                table = succ_cache[key] = {}
            saved = [env.get(v, _MISSING) for v in bound]
            try:
                frontier = [start]
                seen = set()
                depth = 0
                while frontier and (limit is None or depth < limit):
                    depth += 1
                    nxt = []
                    for s in frontier:
                        for t in successors(env, run, table, s):
                            if t == target:
                                return True
                            if t not in seen:
                                seen.add(t)
                                nxt.append(t)
                    frontier = nxt
                    if len(frontier) > rep.max_frontier:
                        rep.max_frontier = len(frontier)
                return False
            finally:
                _restore(env, bound, saved)

        return bfs_tc


def _canonical(state: tuple, sorts: tuple, classes: list[list[int]]) -> tuple:
    """Canonical representative of ``state`` under permutations preserving ``classes``."""
    n = sum(len(c) for c in classes)
    masks = [0] * n
    for j, (val, sort) in enumerate(zip(state, sorts)):
        if sort.is_fo:
            masks[val] |= 1 << j
        elif sort.is_so:
            for (e,) in val:
                masks[e] |= 1 << j
    assigned = [0] * n
    for c in classes:
        for e, m in zip(c, sorted(masks[e] for e in c)):
            assigned[e] = m
    out = []
    for j, (val, sort) in enumerate(zip(state, sorts)):
        bit = 1 << j
        if sort.is_counter:
            out.append(val)
        elif sort.is_fo:
            out.append(next(e for e in range(n) if assigned[e] & bit))
        else:
            out.append(frozenset((e,) for e in range(n) if assigned[e] & bit))
    return tuple(out)


def _state_masks(n: int, state: tuple, sorts: tuple) -> list[int]:
    masks = [0] * n
    for j, (val, sort) in enumerate(zip(state, sorts)):
        if sort.is_fo:
            masks[val] |= 1 << j
        elif sort.is_so:
            for (e,) in val:
                masks[e] |= 1 << j
    return masks


def _relabel(val, sort: L.Sort, perm: list[int]):
    if sort.is_counter:
        return val
    if sort.is_fo:
        return perm[val]
    return frozenset((perm[e],) for (e,) in val)


class _Search:
    """A resumable BFS from one canonical start tuple."""

    __slots__ = ("table", "seen", "frontier", "depth", "done")

    def __init__(self, start: tuple):
        self.table: dict = {}
        self.seen: set = set()
        self.frontier = [start]
        self.depth = 0
        self.done = False


def _symmetric_bfs(f: L.TC, params: tuple, guards: list, groups: list) -> Compiled:
    """BFS over canonical states; see the module docstring.

    Reach(start) is closed under every permutation that fixes the parameters
    and the start tuple, so it suffices to explore one state per orbit and
    to compare canonical forms with the target. Successors of a state are
    enumerated as orbit representatives under the permutations that also fix
    that state, refining the colouring one target position at a time.

    Each call first relabels the domain so that parameters and start take a
    canonical form. Calls that agree up to relabelling then share one search,
    which is resumed until the current target is found or the search ends.
    """
    left, right = f.left, f.right
    al, ar, limit = f.args_left, f.args_right, f.limit
    sorts = tuple(v.sort for v in left)
    bound = left + right
    width = len(left)
    mono, fos, counters = _split(params)
    pvars = mono + fos
    psorts = tuple(v.sort for v in pvars)
    order = [(i, rv, checks if k == len(positions) - 1 else (),
              g if len(positions) == 1 and checks else None)
             for g, (positions, rvars, checks) in enumerate(groups)
             for k, (i, rv) in enumerate(zip(positions, rvars))]
    searches: dict = {}

    def successors(env, run, search, state, base):
        out = search.table.get(state)
        if out is not None:
            return out
        rep = run.report
        rep.states_explored += 1
        if run.max_states is not None and rep.states_explored > run.max_states:
            raise StateCapExceeded(f"explored more than {run.max_states} TC states")
        for v, val in zip(left, state):
            env[v] = val
        found = set()
        if all(g(env, run) for g in guards):
            classes = base
            for val, sort in zip(state, sorts):
                classes = _refine(classes, sort, val)
            pick = [None] * width

            # A single-position group's checks do not see earlier picks, so they
            # are evaluated once under the state's colouring and the survivors
            # are split across the finer classes afterwards.
            coarse = classes
            parent = {e: j for j, c in enumerate(coarse) for e in c}
            valid: dict = {}

            def walk(k, classes):
                if k == len(order):
                    found.add(_canonical(tuple(pick), sorts, base))
                    return
                i, rv, checks, g = order[k]
                sort = sorts[i]
                if g is not None and k > 0:
                    ok = valid.get(g)
                    if ok is None:
                        ok = valid[g] = []
                        for val in _representatives(sort, coarse, run.n):
                            env[rv] = val
                            if all(c(env, run) for c in checks):
                                ok.append(val)
                    cands = _split_orbits(sort, ok, coarse, classes, parent)
                    for val in cands:
                        env[rv] = val
                        pick[i] = val
                        walk(k + 1, _refine(classes, sort, val))
                    return
                for val in _representatives(sort, classes, run.n):
                    env[rv] = val
                    pick[i] = val
                    if all(c(env, run) for c in checks):
                        walk(k + 1, _refine(classes, sort, val))

            walk(0, classes)
        out = search.table[state] = tuple(sorted(found, key=repr))
        return out

    def bfs_tc(env, run):
        rep = run.report
        rep.tc_calls += 1
        n = run.n
        start = tuple([env[a] for a in al])
        pvals = tuple([env[v] for v in pvars])
        masks = _state_masks(n, pvals, psorts)
        smasks = _state_masks(n, start, sorts)
        shift = len(pvars)
        colour = [m | (sm << shift) for m, sm in zip(masks, smasks)]
        ranked = sorted(range(n), key=colour.__getitem__)
        perm = [0] * n
        for new, old in enumerate(ranked):
            perm[old] = new
        base: list[list[int]] = []
        for new, old in enumerate(ranked):
            if base and colour[ranked[new - 1]] == colour[old]:
                base[-1].append(new)
            else:
                base.append([new])
        start = tuple(_relabel(v, s, perm) for v, s in zip(start, sorts))
        target = tuple(_relabel(env[a], s, perm) for a, s in zip(ar, sorts))
        target = _canonical(target, sorts, base)
        key = (n, tuple(colour[e] for e in ranked), tuple([env[c] for c in counters]), start)
        search = searches.get(key)
        if search is None:
            if len(searches) > 4096:
                searches.clear()
            search = searches[key] = _Search(start)
        if target in search.seen:
            return True
        saved = [env.get(v, _MISSING) for v in bound + pvars]
        try:
            for v, val, sort in zip(pvars, pvals, psorts):
                env[v] = _relabel(val, sort, perm)
            while not search.done:
                if not search.frontier or (limit is not None and search.depth >= limit):
                    search.done = True
                    break
                # a level is committed only once complete, so a search stopped by
                # the state cap can be resumed by a later call
                nxt = []
                added = set()
                hit = False
                for st in search.frontier:
                    for t in successors(env, run, search, st, base):
                        if t not in search.seen and t not in added:
                            added.add(t)
                            nxt.append(t)
                            hit = hit or t == target
                search.seen |= added
                search.depth += 1
                search.frontier = nxt
                if len(nxt) > rep.max_frontier:
                    rep.max_frontier = len(nxt)
                if hit:
                    return True
            return False
        finally:
            _restore(env, bound + pvars, saved)

    return bfs_tc


def _restore(env: dict, variables, saved) -> None:
    for v, old in zip(variables, saved):
        if old is _MISSING:
            env.pop(v, None)
        else:
            env[v] = old


def _savitch(env, run, body, left, right, sorts, start, target, limit) -> bool:
    """Midpoint reachability in 1..L steps with L = min(limit, state count)."""
    rep = run.report
    rep.tc_calls += 1
    domains = [enumerate_values(s, run.n) for s in sorts]
    total = 1
    for d in domains:
        total *= len(d)
    bound = total if limit is None else min(limit, total)
    edges: dict = {}

    def edge(a, b):
        r = edges.get((a, b))
        if r is None:
            for v, val in zip(left, a):
                env[v] = val
            for v, val in zip(right, b):
                env[v] = val
            r = edges[(a, b)] = bool(body(env, run))
        return r

    def reach(a, b, steps, depth):
        if depth > rep.max_frontier:
            rep.max_frontier = depth
        if edge(a, b):
            return True
        if steps == 1:
            return False
        half = (steps + 1) // 2
        for mid in itertools.product(*domains):
            rep.states_explored += 1
            if run.max_states is not None and rep.states_explored > run.max_states:
                raise StateCapExceeded(f"explored more than {run.max_states} TC states")
            if reach(a, mid, half, depth + 1) and reach(mid, b, steps - half, depth + 1):
                return True
        return False

    return reach(start, target, bound, 1)


@lru_cache(maxsize=64)
def compile_formula(phi: L.Formula, strategy: str = BFS, symmetry: bool = True) -> Compiled:
    return _Compiler(strategy, symmetry).compile(miniscope_core(L.normalize(phi)))


def evaluate(a: Structure, phi: L.Formula, opts: Optional[EvalOptions] = None) -> EvalReport:
    """Decide ``a |= phi`` and report search statistics."""
    opts = opts or EvalOptions()
    missing = L.free_vars(phi) - a.vocabulary
    if missing:
        raise UnboundVariable(
            "structure vocabulary is not appropriate; missing " + ", ".join(sorted(map(str, missing)))
        )
    fn = compile_formula(phi, opts.tc_strategy, opts.symmetry)
    run = _Run(a.domain_size, opts)
    if opts.registry is not DEFAULT_REGISTRY:
        # memo tables assume one registry per compiled formula
        fn = _Compiler(opts.tc_strategy, opts.symmetry, shared=False).compile(miniscope_core(L.normalize(phi)))
    run.report.result = bool(fn(dict(a.interp), run))
    return run.report


def holds(a: Structure, phi: L.Formula, **kwargs) -> bool:
    return evaluate(a, phi, EvalOptions(**kwargs) if kwargs else None).result


def tc_reachable(a: Structure, tc: L.TC, opts: Optional[EvalOptions] = None) -> EvalReport:
    """Whether ``I(args_right)`` is reachable from ``I(args_left)`` in at least one step."""
    if not isinstance(tc, L.TC):
        raise TypeError("tc_reachable expects a TC node")
    return evaluate(a, tc, opts)


def clear_caches() -> None:
    compile_formula.cache_clear()
    _SHARED.clear()
