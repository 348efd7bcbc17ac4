"""Collapse every corpus formula to existential FO and check equivalence on small structures."""
import argparse
import time
from dataclasses import dataclass

from sotc import logic as L
from sotc.corpus import COLLAPSE_CORPUS
from sotc.text import parse_formula
from sotc.transforms import collapse, equiv_check, exact_bound


@dataclass
class CollapseConfig:
    max_n: int = 3
    workers: int = 1


def size(f: L.Formula) -> int:
    return sum(1 for _ in L.subformulas(f))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=3)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    cfg = CollapseConfig(args.max_n, args.workers)
    for src in COLLAPSE_CORPUS:
        phi = parse_formula(src)
        t = time.perf_counter()
        out = collapse(phi, bound=exact_bound(cfg.max_n))
        verdict = equiv_check(phi, out, sorted(L.free_vars(phi)), cfg.max_n, workers=cfg.workers)
        print(f"{'ok ' if verdict.equivalent else 'BAD'} {L.classify(out).name:>10} size {size(phi):>4} -> {size(out):>6} "
              f"{verdict.structures_checked:>6} structures {time.perf_counter() - t:>7.2f}s  {src}", flush=True)


if __name__ == "__main__":
    main()
