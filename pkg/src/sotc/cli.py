"""Batch command line front end.

The first line of standard output is a single verdict or tag token. Exit
status is 0 for ``true``/equivalent, 1 for ``false``/inequivalent and 2 for
usage or input errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import logic as L
from .encoders import (
    LinearSetSpec,
    TilingInstance,
    hamiltonian_direct,
    hamiltonian_formula,
    linear_set_formula,
    prime_formula,
    tiling_direct,
    tiling_encode,
)
from .errors import LogicError
from .evaluator import BFS, SAVITCH, EvalOptions, evaluate
from .text import dump_structure, parse_formula, parse_structure, print_formula
from .transforms import Fidelity, collapse, eliminate_counters, equiv_check, exact_bound, plus_translate

OK, NO, ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def read_formula(path: str) -> L.Formula:
    return parse_formula(Path(path).read_text(), allow_reserved=True)


def read_json(path: str):
    return json.loads(Path(path).read_text())


def parse_vocab(doc) -> list[L.Variable]:
    """Vocabulary file: ``{"E": 2, "x": "fo", "c": "counter"}``.

    An integer value is the arity of a relation symbol. A structure document
    is also accepted; its interpretation keys give the vocabulary.
    """
    if isinstance(doc, dict) and "interpretation" in doc:
        return sorted(parse_structure(doc).vocabulary)
    if not isinstance(doc, dict):
        raise UsageError("vocabulary must be a JSON object")
    out = []
    for name, kind in doc.items():
        if kind == "fo":
            out.append(L.fo(name))
        elif kind == "counter":
            out.append(L.counter(name))
        elif isinstance(kind, int) and not isinstance(kind, bool) and kind >= 1:
            out.append(L.rel(name, kind))
        else:
            raise UsageError(f"bad vocabulary entry {name!r}: {kind!r}")
    return out


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        Path(path).write_text(text + "\n")
    else:
        print(text)


def _tags(phi: L.Formula) -> None:
    tag = L.classify(phi)
    print(tag.name)
    print(json.dumps(tag.flags(), sort_keys=True))


def cmd_check(args) -> int:
    a = parse_structure(read_json(args.structure))
    phi = read_formula(args.formula)
    opts = EvalOptions(tc_strategy=args.strategy, collect_stats=args.stats, max_states=args.max_states)
    rep = evaluate(a, phi, opts)
    print("true" if rep.result else "false")
    if args.stats:
        print(json.dumps(rep.as_dict(), sort_keys=True))
    return OK if rep.result else NO


def cmd_translate(args) -> int:
    phi = read_formula(args.input)
    if args.mode == "counters-out":
        out = eliminate_counters(phi)
    elif args.mode == "plus-lift":
        out = plus_translate(phi)
    else:
        out = collapse(phi, bound=exact_bound(args.max_n))
    _emit(print_formula(out), args.output)
    _tags(out)
    return OK


def cmd_encode(args) -> int:
    fid = Fidelity(args.fidelity)
    if args.problem == "hamiltonian":
        phi = hamiltonian_formula(fid)
    elif args.problem == "prime":
        phi = prime_formula(fid)
    elif args.problem == "linearset":
        spec = LinearSetSpec.from_json(_need(args.params, "linearset"))
        k = spec.dimension.bit_length() - 1
        phi = linear_set_formula(spec, k, fidelity=fid)
    else:
        p = TilingInstance.from_json(_need(args.params, "tiling"))
        a, phi = tiling_encode(p, fid)
        if args.structure_out:
            Path(args.structure_out).write_text(dump_structure(a) + "\n")
        else:
            print(dump_structure(a))
    _emit(print_formula(phi), args.output)
    return OK


def _need(path: Optional[str], problem: str):
    if not path:
        raise UsageError(f"encode {problem} needs a parameter file")
    return read_json(path)


def cmd_solve(args) -> int:
    doc = read_json(args.params)
    if args.problem == "tiling":
        ok = tiling_direct(TilingInstance.from_json(doc))
    else:
        ok = hamiltonian_direct(parse_structure(doc))
    print("true" if ok else "false")
    return OK if ok else NO


def cmd_equiv(args) -> int:
    phi, psi = read_formula(args.first), read_formula(args.second)
    vocab = parse_vocab(read_json(args.vocab))
    opts = EvalOptions(tc_strategy=args.strategy, max_states=args.max_states)
    verdict = equiv_check(phi, psi, vocab, args.max_n, opts, workers=args.parallel)
    if verdict.equivalent:
        print(f"equivalent ({verdict.structures_checked} structures)")
        return OK
    print("inequivalent")
    print(dump_structure(verdict.counterexample))
    return NO


def cmd_classify(args) -> int:
    _tags(read_formula(args.formula))
    return OK


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sotc", description="Workbench for SO(TC), MSO(TC) and CMSO(TC).")
    sub = p.add_subparsers(dest="command", required=True)

    def eval_flags(q, stats=True):
        q.add_argument("--strategy", choices=[BFS, SAVITCH], default=BFS)
        q.add_argument("--max-states", type=_positive, default=None)
        if stats:
            q.add_argument("--stats", action="store_true", help="print search statistics as JSON")

    q = sub.add_parser("check", help="evaluate a formula on a structure")
    q.add_argument("structure")
    q.add_argument("formula")
    eval_flags(q)
    q.set_defaults(fn=cmd_check)

    q = sub.add_parser("translate", help="apply a formula transformation")
    q.add_argument("mode", choices=["counters-out", "collapse", "plus-lift"])
    q.add_argument("input")
    q.add_argument("output", nargs="?")
    q.add_argument("--max-n", type=_positive, default=3, help="largest structure size the collapse must serve")
    q.set_defaults(fn=cmd_translate)

    q = sub.add_parser("encode", help="write a problem encoding")
    q.add_argument("problem", choices=["hamiltonian", "tiling", "prime", "linearset"])
    q.add_argument("params", nargs="?")
    q.add_argument("-o", "--output")
    q.add_argument("--structure-out")
    q.add_argument("--fidelity", choices=[f.value for f in Fidelity], default=Fidelity.CORRECTED.value)
    q.set_defaults(fn=cmd_encode)

    q = sub.add_parser("solve", help="run the direct combinatorial decider")
    q.add_argument("problem", choices=["tiling", "hamiltonian"])
    q.add_argument("params")
    q.set_defaults(fn=cmd_solve)

    q = sub.add_parser("equiv", help="compare two formulas on all small structures")
    q.add_argument("first")
    q.add_argument("second")
    q.add_argument("vocab")
    q.add_argument("max_n", type=_positive, nargs="?")
    q.add_argument("--max-n", dest="max_n_flag", type=_positive)
    q.add_argument("--parallel", type=_positive, default=1)
    eval_flags(q, stats=False)
    q.set_defaults(fn=cmd_equiv)

    q = sub.add_parser("classify", help="print fragment tags")
    q.add_argument("formula")
    q.set_defaults(fn=cmd_classify)
    return p


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return ERROR if e.code else OK
    if args.command == "equiv":
        args.max_n = args.max_n or args.max_n_flag
        if args.max_n is None:
            print("error: equiv needs max_n", file=sys.stderr)
            return ERROR
    try:
        return args.fn(args)
    except (LogicError, UsageError, OSError, ValueError, KeyError, TypeError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
