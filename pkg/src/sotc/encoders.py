"""Concrete problem encodings and the combinatorial oracles they are checked against.

* Hamiltonian cycles in MSO(TC);
* corridor tiling as a monadic 2TC[AFO] sentence over a successor structure;
* primality of the domain size;
* linear sets of Parikh vectors over unary vocabularies.
"""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import logic as L
from .errors import DimensionMismatch, InvalidInstance
from .numeric import SUCC
from .structures import Structure
from .text import parse_formula
from .transforms import Fidelity, lifted_predicate

EDGE = L.rel("E", 2)


# -- Hamiltonian cycles -------------------------------------------------------------

_HAMILTONIAN = (
    "E X Y x y. (X(x) & (A z. (z != x -> !{singleton})) & (A z. Y(z)) & E(y, x)"
    " & [TC{{Z, z ; Z', z'}} (!Z(z') & A x. (Z'(x) <-> Z(x) | z' = x) & E(z, z'))](X, x ; Y, y))"
)


def hamiltonian_formula(fidelity: Fidelity = Fidelity.CORRECTED) -> L.Formula:
    """Grow a path one new vertex at a time from ``{x}`` to the whole vertex set.

    The literal text writes the singleton condition as ``A z (z != x -> !X(x))``,
    which only holds on one-element domains; the corrected text uses ``!X(z)``.
    """
    singleton = "X(x)" if Fidelity(fidelity) is Fidelity.PAPER_LITERAL else "X(z)"
    return parse_formula(_HAMILTONIAN.format(singleton=singleton))


def hamiltonian_direct(g: Structure) -> bool:
    """Brute force: a cyclic ordering of all vertices, at least two, along edges."""
    n = g.domain_size
    edges = g[EDGE]
    if n < 2:
        return False
    for rest in itertools.permutations(range(1, n)):
        cycle = (0,) + rest
        if all((cycle[i], cycle[(i + 1) % n]) in edges for i in range(n)):
            return True
    return False


# -- corridor tiling ----------------------------------------------------------------

@dataclass(frozen=True)
class TilingInstance:
    """Tiles are ``1..tiles``; rows ``b`` (bottom) and ``t`` (top) fix the width."""

    tiles: int
    H: frozenset
    V: frozenset
    b: tuple
    t: tuple

    def __post_init__(self):
        object.__setattr__(self, "H", frozenset(tuple(p) for p in self.H))
        object.__setattr__(self, "V", frozenset(tuple(p) for p in self.V))
        object.__setattr__(self, "b", tuple(self.b))
        object.__setattr__(self, "t", tuple(self.t))
        if self.tiles < 1:
            raise InvalidInstance("need at least one tile")
        if len(self.b) < 1 or len(self.b) != len(self.t):
            raise InvalidInstance("rows b and t must be nonempty and of equal width")
        tiles = range(1, self.tiles + 1)
        for i in self.b + self.t:
            if i not in tiles:
                raise InvalidInstance(f"tile {i!r} is not in 1..{self.tiles}")
        for rel in (self.H, self.V):
            for p in rel:
                if len(p) != 2 or p[0] not in tiles or p[1] not in tiles:
                    raise InvalidInstance(f"constraint {p!r} is not a pair of tiles")

    @property
    def width(self) -> int:
        return len(self.b)

    def to_json(self) -> dict:
        return {
            "tiles": self.tiles,
            "H": sorted(map(list, self.H)),
            "V": sorted(map(list, self.V)),
            "b": list(self.b),
            "t": list(self.t),
        }

    @classmethod
    def from_json(cls, doc) -> "TilingInstance":
        if isinstance(doc, str):
            doc = json.loads(doc)
        try:
            return cls(doc["tiles"], doc["H"], doc["V"], doc["b"], doc["t"])
        except (KeyError, TypeError) as e:
            raise InvalidInstance(f"malformed tiling instance: {e}") from None


def _tile_vars(stem: str, k: int) -> list[L.Variable]:
    return [L.rel(f"{stem}{i}", 1) for i in range(1, k + 1)]


def tiling_encode(p: TilingInstance, fidelity: Fidelity = Fidelity.CORRECTED) -> tuple[Structure, L.Formula]:
    """The successor structure of width ``n`` and the TC sentence over rows.

    Row ``r`` is encoded by sets ``Z1..Zk`` with ``Zi`` holding the columns
    tiled ``i``. The literal vertical constraint mentions ``Z'j(y)`` with ``y``
    unbound; the corrected one reads ``Z'j(x)``.
    """
    k, n = p.tiles, p.width
    xs, ys = _tile_vars("X", k), _tile_vars("Y", k)
    zs, zs2 = _tile_vars("Z", k), [L.rel(f"Z{i}'", 1) for i in range(1, k + 1)]
    x, y = L.fo("x"), L.fo("y")
    interp = {SUCC: {(i, i + 1) for i in range(n - 1)}}
    for i in range(k):
        interp[xs[i]] = {(j,) for j in range(n) if p.b[j] == i + 1}
        interp[ys[i]] = {(j,) for j in range(n) if p.t[j] == i + 1}
    a = Structure(n, interp)

    def z2(i):
        return zs2[i - 1]

    phi_t = L.Forall(x, L.disj(*(
        L.conj(L.atom(z2(i), x), *(L.Not(L.atom(z2(j), x)) for j in range(1, k + 1) if j != i))
        for i in range(1, k + 1)
    )))
    phi_h = L.forall((x, y), L.Implies(
        L.atom(SUCC, x, y),
        L.disj(*(L.And(L.atom(z2(i), x), L.atom(z2(j), y)) for i, j in sorted(p.H))),
    ))
    vy = y if Fidelity(fidelity) is Fidelity.PAPER_LITERAL else x
    phi_v = L.Forall(x, L.disj(*(L.And(L.atom(zs[i - 1], x), L.atom(z2(j), vy)) for i, j in sorted(p.V))))
    phi = L.TC(tuple(zs), tuple(zs2), L.conj(phi_t, phi_h, phi_v), tuple(xs), tuple(ys))
    return a, phi


def _rows(p: TilingInstance) -> list[tuple]:
    """Rows whose horizontal neighbours are all allowed by ``H``."""
    return [
        r for r in itertools.product(range(1, p.tiles + 1), repeat=p.width)
        if all((r[i], r[i + 1]) in p.H for i in range(p.width - 1))
    ]


def tiling_direct(p: TilingInstance) -> bool:
    """BFS from ``b`` to ``t`` over H-consistent rows, stepping by ``V``; at least one step."""
    rows = _rows(p)
    seen = set()
    queue = deque([p.b])
    while queue:
        r = queue.popleft()
        for r2 in rows:
            if all((r[i], r2[i]) in p.V for i in range(p.width)):
                if r2 == p.t:
                    return True
                if r2 not in seen:
                    seen.add(r2)
                    queue.append(r2)
    return False


# -- cardinality gadgets ------------------------------------------------------------

def size_formula(x: L.Variable, c: int) -> L.Formula:
    """``|X| = c`` as a plain first-order formula."""
    if c < 0:
        raise ValueError("size must be nonnegative")
    us = [L.fo(f"u{i}") for i in range(1, c + 1)]
    w = L.fo("w")
    distinct = [L.neq(a, b) for a, b in itertools.combinations(us, 2)]
    inside = [L.atom(x, u) for u in us]
    covered = L.Forall(w, L.Implies(L.atom(x, w), L.disj(*(L.Eq(w, u) for u in us))))
    if not us:
        return L.Forall(w, L.Not(L.atom(x, w)))
    return L.exists(us, L.conj(*distinct, *inside, covered))


def prime_formula(fidelity: Fidelity = Fidelity.CORRECTED) -> L.Formula:
    """``|A|`` is prime: no two factors other than 1 multiply to the full domain.

    As printed the sentence also holds when ``|A| = 1``; the corrected variant
    adds ``!size(X, 1)``.
    """
    X, Y, Z, x = L.rel("X"), L.rel("Y"), L.rel("Z"), L.fo("x")
    fresh = L.FreshNames(avoid=["X", "Y", "Z", "x"])
    times = lifted_predicate("times", [Y, Z, X], fresh=fresh)
    matrix = L.Or(L.Or(size_formula(Y, 1), size_formula(Z, 1)), L.Not(times))
    full = L.Forall(x, L.atom(X, x))
    if Fidelity(fidelity) is not Fidelity.PAPER_LITERAL:
        full = L.And(full, L.Not(size_formula(X, 1)))
    return L.Exists(X, L.Forall(Y, L.Forall(Z, L.And(full, matrix))))


def is_prime(n: int) -> bool:
    """Trial division."""
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n ** 0.5) + 1))


# -- linear sets --------------------------------------------------------------------

@dataclass(frozen=True)
class LinearSetSpec:
    """``{offset + sum a_i * generators[i] | a_i >= 0}``."""

    offset: tuple
    generators: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "offset", tuple(self.offset))
        object.__setattr__(self, "generators", tuple(tuple(g) for g in self.generators))
        for v in (self.offset,) + self.generators:
            if len(v) != self.dimension:
                raise DimensionMismatch("offset and generators must have the same dimension")
            if any((not isinstance(c, int)) or c < 0 for c in v):
                raise ValueError("components must be nonnegative integers")

    @property
    def dimension(self) -> int:
        return len(self.offset)

    def to_json(self) -> dict:
        return {"offset": list(self.offset), "generators": [list(g) for g in self.generators]}

    @classmethod
    def from_json(cls, doc) -> "LinearSetSpec":
        if isinstance(doc, str):
            doc = json.loads(doc)
        return cls(doc["offset"], doc.get("generators", ()))


def linear_set_member(v: Sequence[int], spec: LinearSetSpec) -> bool:
    """Bounded search over coefficients; each is at most the largest component of ``v``."""
    v = tuple(v)
    if len(v) != spec.dimension:
        raise DimensionMismatch(f"vector of dimension {len(v)} against a set of dimension {spec.dimension}")
    gens = [g for g in spec.generators if any(g)]
    top = max(v, default=0)

    def search(i: int, rest: tuple) -> bool:
        if any(c < 0 for c in rest):
            return False
        if i == len(gens):
            return not any(rest)
        for a in range(top + 1):
            r = tuple(c - a * g for c, g in zip(rest, gens[i]))
            if any(c < 0 for c in r):
                break
            if search(i + 1, r):
                return True
        return False

    return search(0, tuple(c - o for c, o in zip(v, spec.offset)))


def cell_formula(cell: int, xs: Sequence[L.Variable], x: L.Variable) -> L.Formula:
    """Membership in the Boolean combination numbered ``cell`` (bit j: in ``xs[j]``)."""
    return L.conj(*(
        L.atom(v, x) if cell >> j & 1 else L.Not(L.atom(v, x)) for j, v in enumerate(xs)
    ))


def linear_set_formula(
    spec: LinearSetSpec,
    k: int,
    xs: Optional[Sequence[L.Variable]] = None,
    fidelity: Fidelity = Fidelity.CORRECTED,
) -> L.Formula:
    """Sentence over ``X1..Xk`` that holds iff the Parikh vector lies in the linear set.

    Cell ``i`` is ordered as in :func:`structures.parikh_vector`. Each
    generator ``v_i`` gets a set tuple ``Z_i`` of sizes ``v_i`` and a
    multiplier ``S_i``; ``R_i[j] = |Z_i[j]| * |S_i|`` and cell ``j`` must have
    size ``|Z_0[j]| + sum_i |R_i[j]|``.

    The literal construction also demands ``|Z_i[j]| = v_i[j]`` when that
    exceeds the domain, which makes it false on small structures even if the
    coefficient of ``v_i`` is zero. The corrected variant also lets every
    ``Z_i[j]`` be empty, which contributes nothing, like a zero coefficient.
    """
    n = 1 << k
    if spec.dimension != n:
        raise DimensionMismatch(f"{k} unary symbols give {n} cells, the set has dimension {spec.dimension}")
    if len(spec.generators) > n:
        raise DimensionMismatch(f"at most {n} generators are supported, got {len(spec.generators)}")
    xs = list(xs) if xs is not None else [L.rel(f"X{j}") for j in range(1, k + 1)]
    m = len(spec.generators)
    vectors = (spec.offset,) + spec.generators
    ys = [L.rel(f"Y{j}") for j in range(1, n + 1)]
    zs = [[L.rel(f"Z{i}_{j}") for j in range(1, n + 1)] for i in range(m + 1)]
    rs = [None] + [[L.rel(f"R{i}_{j}") for j in range(1, n + 1)] for i in range(1, m + 1)]
    ss = [None] + [L.rel(f"S{i}") for i in range(1, m + 1)]
    names = [v.name for v in xs + ys] + [v.name for row in zs for v in row]
    fresh = L.FreshNames(avoid=names + [v.name for row in rs[1:] for v in row] + [v.name for v in ss[1:]])

    if fidelity is Fidelity.PAPER_LITERAL:
        gen = L.conj(*(size_formula(zs[i][j], vectors[i][j]) for i in range(m + 1) for j in range(n)))
    else:
        gen = L.conj(
            *(size_formula(zs[0][j], spec.offset[j]) for j in range(n)),
            *(L.Or(L.conj(*(size_formula(zs[i][j], vectors[i][j]) for j in range(n))),
                   L.conj(*(size_formula(zs[i][j], 0) for j in range(n))))
              for i in range(1, m + 1)),
        )
    products = [
        lifted_predicate("times", [zs[i][j], ss[i], rs[i][j]], fresh=fresh)
        for i in range(1, m + 1) for j in range(n)
    ]
    sums = [
        lifted_predicate(f"plus{m + 1}", [zs[0][j]] + [rs[i][j] for i in range(1, m + 1)] + [ys[j]], fresh=fresh)
        for j in range(n)
    ]
    quantified = [v for row in zs for v in row] + [v for row in rs[1:] for v in row] + ss[1:]
    star = L.exists(quantified, L.conj(gen, *products, *sums))
    x = L.fo("x")
    bc = L.conj(*(L.Forall(x, L.Iff(L.atom(ys[c], x), cell_formula(c, xs, x))) for c in range(n)))
    return L.exists(ys, L.And(bc, star))
