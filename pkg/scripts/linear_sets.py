"""Compare the printed and corrected linear-set formulas against Parikh-vector membership."""
import argparse
import time
from dataclasses import dataclass, field

from sotc import logic as L
from sotc.encoders import LinearSetSpec, linear_set_formula, linear_set_member
from sotc.evaluator import holds
from sotc.structures import parikh_vector, structure_from_cells
from sotc.transforms import Fidelity

DEFAULT_SPECS = [
    ((1, 0), ((1, 1), (0, 2))),
    ((0, 0), ((1, 0),)),
    ((0, 1), ((2, 0), (0, 3))),
    ((2, 2), ()),
    ((1, 1), ((1, 2),)),
    ((0, 0), ((3, 0), (1, 1))),
]


@dataclass
class LinearSetConfig:
    max_n: int = 6
    specs: list = field(default_factory=lambda: [LinearSetSpec(o, g) for o, g in DEFAULT_SPECS])


def disagreements(spec: LinearSetSpec, fidelity: Fidelity, max_n: int) -> list:
    X1 = L.rel("X1")
    phi = linear_set_formula(spec, 1, fidelity=fidelity)
    out = []
    for n in range(1, max_n + 1):
        # with one unary relation only the cell sizes matter
        for inside in range(n + 1):
            a = structure_from_cells((n - inside, inside), [X1])
            if holds(a, phi) != linear_set_member(parikh_vector(a, [X1]), spec):
                out.append((n, inside))
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=6)
    cfg = LinearSetConfig(ap.parse_args().max_n)
    for spec in cfg.specs:
        for fid in (Fidelity.CORRECTED, Fidelity.PAPER_LITERAL):
            t = time.perf_counter()
            bad = disagreements(spec, fid, cfg.max_n)
            print(f"{fid.value:>8} offset {spec.offset} generators {list(spec.generators)}: "
                  f"{len(bad)} disagreements {bad} {time.perf_counter() - t:.1f}s", flush=True)


if __name__ == "__main__":
    main()
