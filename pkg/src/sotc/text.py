"""Concrete syntax for formulas and the JSON format for structures.

Formula grammar (precedence from loosest to tightest: ``<->``, ``->``, ``|``,
``&``, prefix operators)::

    phi ::= E x. phi | A x. phi | E X. phi | A X. phi | E %m. phi | ! phi
          | phi & phi | phi | phi | phi -> phi | phi <-> phi | ( phi )
          | x = y | x != y | X(x, ...) | %m = #{ x | phi } | @p(%m, ...)
          | [TC{tuple ; tuple} phi](tuple ; tuple)
          | [TC^k{tuple ; tuple} phi](tuple ; tuple)

Identifiers whose first letter is uppercase are relation variables, lowercase
ones are element variables and ``%``-prefixed ones are counters. Relation
arities are inferred from use. Names beginning with ``_`` are reserved for
generated variables and only accepted with ``allow_reserved=True``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Any, Iterable, Optional

from . import logic as L
from .errors import (
    ArityMismatch,
    DomainEmpty,
    FormulaSyntaxError,
    InconsistentArity,
)
from .structures import Structure

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+|//[^\n]*)
  | (?P<counter>%[A-Za-z_][A-Za-z0-9_']*)
  | (?P<pred>@[A-Za-z_][A-Za-z0-9_']*)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<int>[0-9]+)
  | (?P<op><->|->|!=|[|&!=()\[\]{};,.\#^])
    """,
    re.VERBOSE,
)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        tok = m.group()
        if kind != "ws":
            out.append(Token(kind if kind != "op" else tok, tok, line, m.start() - line_start + 1))
        for i, ch in enumerate(tok):
            if ch == "\n":
                line += 1
                line_start = m.start() + i + 1
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


def lexical_kind(name: str) -> str:
    for ch in name:
        if ch.isalpha():
            return L.SO_KIND if ch.isupper() else L.FO_KIND
    raise ValueError(f"identifier {name!r} has no letter")


# raw variables: (name, kind); relations get their arity after parsing
class _Parser:
    def __init__(self, text: str, allow_reserved: bool):
        self.toks = tokenize(text)
        self.i = 0
        self.allow_reserved = allow_reserved
        self.arity: dict[str, int] = {}
        self.links: list[tuple[str, str]] = []

    # token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg: str, tok: Optional[Token] = None):
        tok = tok or self.tok
        raise FormulaSyntaxError(msg, tok.line, tok.col)

    def expect(self, kind: str) -> Token:
        if self.tok.kind != kind:
            found = self.tok.text or "end of input"
            self.error(f"expected {kind!r}, found {found!r}")
        t = self.tok
        self.i += 1
        return t

    def accept(self, kind: str) -> bool:
        if self.tok.kind == kind:
            self.i += 1
            return True
        return False

    # variables
    def var(self) -> tuple[str, str]:
        t = self.tok
        if t.kind == "counter":
            name = t.text[1:]
            kind = L.COUNTER_KIND
        elif t.kind == "ident":
            name = t.text
            kind = lexical_kind(name)
        else:
            self.error(f"expected a variable, found {t.text or 'end of input'!r}")
        if name.startswith("_") and not self.allow_reserved:
            self.error(f"identifier {name!r} is in the reserved namespace", t)
        self.i += 1
        return (name, kind)

    def fo_var(self) -> tuple[str, str]:
        t = self.tok
        v = self.var()
        if v[1] != L.FO_KIND:
            self.error(f"expected an element variable, found {t.text!r}", t)
        return v

    def tuple_(self, closer: str) -> list[tuple[str, str]]:
        out = [self.var()]
        while self.accept(","):
            out.append(self.var())
        if self.tok.kind != closer:
            self.error(f"expected {closer!r} or ','")
        return out

    def note_arity(self, name: str, k: int, tok: Token):
        seen = self.arity.setdefault(name, k)
        if seen != k:
            raise InconsistentArity(
                f"{name} used with arity {seen} and {k} (line {tok.line}, column {tok.col})"
            )

    # grammar
    def formula(self):
        return self.iff()

    def iff(self):
        left = self.implies()
        while self.accept("<->"):
            left = ("iff", left, self.implies())
        return left

    def implies(self):
        left = self.or_()
        if self.accept("->"):
            return ("imp", left, self.implies())
        return left

    def or_(self):
        left = self.and_()
        while self.accept("|"):
            left = ("or", left, self.and_())
        return left

    def and_(self):
        left = self.unary()
        while self.accept("&"):
            left = ("and", left, self.unary())
        return left

    def unary(self):
        t = self.tok
        if self.accept("!"):
            return ("not", self.unary())
        if t.kind == "ident" and t.text in ("E", "A") and self.peek().kind in ("ident", "counter"):
            self.i += 1
            names = [self.var()]
            while self.tok.kind != ".":
                self.accept(",")
                names.append(self.var())
            self.expect(".")
            body = self.formula()
            tag = "ex" if t.text == "E" else "all"
            for v in reversed(names):
                body = (tag, v, body)
            return body
        return self.primary()

    def primary(self):
        t = self.tok
        if self.accept("("):
            f = self.formula()
            self.expect(")")
            return f
        if t.kind == "[":
            return self.tc()
        if t.kind == "pred":
            self.i += 1
            self.expect("(")
            args = self.tuple_(")") if self.tok.kind != ")" else []
            self.expect(")")
            return ("num", t.text[1:], args)
        if t.kind == "counter":
            c = self.var()
            self.expect("=")
            self.expect("#")
            self.expect("{")
            x = self.fo_var()
            self.expect("|")
            body = self.formula()
            self.expect("}")
            return ("card", c, x, body)
        if t.kind == "ident":
            v = self.var()
            if v[1] == L.FO_KIND and self.tok.kind == "(":
                v = (v[0], L.SO_KIND)  # lowercase relation symbol such as s(x, y)
            if v[1] == L.SO_KIND:
                self.expect("(")
                args = [self.fo_var()]
                while self.accept(","):
                    args.append(self.fo_var())
                self.expect(")")
                self.note_arity(v[0], len(args), t)
                return ("atom", v, args)
            if self.accept("="):
                return ("eq", v, self.fo_var())
            if self.accept("!="):
                return ("not", ("eq", v, self.fo_var()))
            self.error("expected '=' or '!=' after element variable")
        self.error(f"unexpected {t.text or 'end of input'!r}")

    def tc(self):
        start = self.expect("[")
        t = self.tok
        if t.kind != "ident" or t.text != "TC":
            self.error("expected 'TC'")
        self.i += 1
        limit = None
        if self.accept("^"):
            lt = self.expect("int")
            limit = int(lt.text)
            if limit < 1:
                self.error("TC limit must be positive", lt)
        self.expect("{")
        left = self.tuple_(";")
        self.expect(";")
        right = self.tuple_("}")
        self.expect("}")
        body = self.formula()
        self.expect("]")
        self.expect("(")
        args_left = self.tuple_(";")
        self.expect(";")
        args_right = self.tuple_(")")
        self.expect(")")
        if not (len(left) == len(right) == len(args_left) == len(args_right)):
            self.error("TC tuples must have equal length", start)
        for tup in (right, args_left, args_right):
            for a, b in zip(left, tup):
                if a[1] == L.SO_KIND and b[1] == L.SO_KIND:
                    self.links.append((a[0], b[0]))
        return ("tc", left, right, body, args_left, args_right, limit)

    # second pass
    def resolve_arities(self, raw) -> dict[str, int]:
        parent: dict[str, str] = {}

        def find(a):
            parent.setdefault(a, a)
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for a, b in self.links:
            parent[find(a)] = find(b)
        cls_arity: dict[str, int] = {}
        for name, k in self.arity.items():
            r = find(name)
            seen = cls_arity.setdefault(r, k)
            if seen != k:
                raise InconsistentArity(f"{name} has arity {k} but is paired in a TC tuple with arity {seen}")
        return {name: cls_arity.get(find(name), 1) for name in parent.keys() | self.arity.keys()}

    def build(self, raw, arities):
        def v(pair):
            name, kind = pair
            if kind == L.SO_KIND:
                return L.rel(name, arities.get(name, 1))
            return L.Variable(name, L.FIRST_ORDER if kind == L.FO_KIND else L.COUNTER)

        def go(r):
            tag = r[0]
            if tag == "eq":
                return L.Eq(v(r[1]), v(r[2]))
            if tag == "atom":
                return L.Atom(v(r[1]), tuple(map(v, r[2])))
            if tag == "num":
                return L.NumAtom(r[1], tuple(map(v, r[2])))
            if tag == "not":
                return L.Not(go(r[1]))
            if tag in ("or", "and", "imp", "iff"):
                cls = {"or": L.Or, "and": L.And, "imp": L.Implies, "iff": L.Iff}[tag]
                return cls(go(r[1]), go(r[2]))
            if tag in ("ex", "all"):
                cls = L.Exists if tag == "ex" else L.Forall
                return cls(v(r[1]), go(r[2]))
            if tag == "tc":
                _, left, right, body, al, ar, limit = r
                return L.TC(
                    tuple(map(v, left)), tuple(map(v, right)), go(body),
                    tuple(map(v, al)), tuple(map(v, ar)), limit,
                )
            if tag == "card":
                return L.CounterCard(v(r[1]), v(r[2]), go(r[3]))
            raise AssertionError(tag)

        return go(raw)


def parse_formula(text: str, allow_reserved: bool = False) -> L.Formula:
    p = _Parser(text, allow_reserved)
    raw = p.formula()
    if p.tok.kind != "eof":
        p.error(f"unexpected {p.tok.text!r} after formula")
    phi = p.build(raw, p.resolve_arities(raw))
    return L.sort_check(phi, require_closed=False)


# -- printing -------------------------------------------------------------------

_PREC = {L.Iff: 1, L.Implies: 2, L.Or: 3, L.And: 4}
_OPS = {L.Iff: "<->", L.Implies: "->", L.Or: "|", L.And: "&"}
_UNARY = 5
_ATOMIC = 6


def _name(v: L.Variable, head: bool = False) -> str:
    if v.sort.is_counter:
        return f"%{v.name}"
    if head and v.sort.is_so:
        lexical_kind(v.name)
        return v.name
    if lexical_kind(v.name) != v.sort.kind:
        raise ValueError(f"variable {v.name!r} of sort {v.sort} breaks the lexical convention")
    return v.name


def _tuple(vs: Iterable[L.Variable]) -> str:
    return ", ".join(map(_name, vs))


def _prec(f: L.Formula) -> int:
    if isinstance(f, L.QUANTIFIERS):
        return 0
    if type(f) in _PREC:
        return _PREC[type(f)]
    if isinstance(f, L.Not) and not isinstance(f.body, L.Eq):
        return _UNARY
    return _ATOMIC


def _pp(f: L.Formula, need: int) -> str:
    s = _pp_node(f)
    return f"({s})" if _prec(f) < need else s


def _pp_node(f: L.Formula) -> str:
    if isinstance(f, L.Eq):
        return f"{_name(f.left)} = {_name(f.right)}"
    if isinstance(f, L.Not) and isinstance(f.body, L.Eq):
        return f"{_name(f.body.left)} != {_name(f.body.right)}"
    if isinstance(f, L.Atom):
        return f"{_name(f.rel, head=True)}({_tuple(f.args)})"
    if isinstance(f, L.NumAtom):
        return f"@{f.pred}({_tuple(f.args)})"
    if isinstance(f, L.Not):
        return "!" + _pp(f.body, _UNARY)
    if type(f) in _PREC:
        p = _PREC[type(f)]
        right_assoc = isinstance(f, L.Implies)
        left = _pp(f.left, p + 1 if right_assoc else p)
        right = _pp(f.right, p if right_assoc else p + 1)
        return f"{left} {_OPS[type(f)]} {right}"
    if isinstance(f, L.QUANTIFIERS):
        q = "E" if isinstance(f, L.Exists) else "A"
        return f"{q} {_name(f.var)}. {_pp(f.body, 0)}"
    if isinstance(f, L.TC):
        lim = f"^{f.limit}" if f.limit is not None else ""
        return (
            f"[TC{lim}{{{_tuple(f.left)} ; {_tuple(f.right)}}} {_pp(f.body, 0)}]"
            f"({_tuple(f.args_left)} ; {_tuple(f.args_right)})"
        )
    if isinstance(f, L.CounterCard):
        return f"{_name(f.counter)} = #{{ {_name(f.var)} | {_pp(f.body, 0)} }}"
    raise TypeError(f"not a formula: {f!r}")


def print_formula(phi: L.Formula) -> str:
    return _pp(phi, 0)


# -- structures -----------------------------------------------------------------

def parse_structure(doc: Any) -> Structure:
    """Build a structure from its JSON document (a dict or a JSON string)."""
    if isinstance(doc, (str, bytes)):
        doc = json.loads(doc)
    n = doc.get("domain_size")
    if not isinstance(n, int) or n < 1:
        raise DomainEmpty(f"domain_size must be a positive integer, got {n!r}")
    interp = {}
    for name, binding in doc.get("interpretation", {}).items():
        if "element" in binding:
            interp[L.fo(name)] = binding["element"]
        elif "counter" in binding:
            interp[L.counter(name.lstrip("%"))] = binding["counter"]
        elif "arity" in binding:
            k = binding["arity"]
            tuples = [tuple(t) for t in binding.get("tuples", [])]
            for t in tuples:
                if len(t) != k:
                    raise ArityMismatch(f"tuple {list(t)} of {name} does not have width {k}")
            interp[L.rel(name, k)] = frozenset(tuples)
        else:
            raise ValueError(f"binding for {name!r} has no element/counter/arity field")
    return Structure(n, interp)


def print_structure(a: Structure) -> dict:
    interp = {}
    for v in sorted(a.interp, key=lambda v: (v.name, v.sort)):
        val = a.interp[v]
        if v.sort.is_fo:
            interp[v.name] = {"element": val}
        elif v.sort.is_counter:
            interp[v.name] = {"counter": val}
        else:
            interp[v.name] = {"arity": v.sort.arity, "tuples": [list(t) for t in sorted(val)]}
    return {"domain_size": a.domain_size, "interpretation": interp}


def dump_structure(a: Structure) -> str:
    return json.dumps(print_structure(a))
