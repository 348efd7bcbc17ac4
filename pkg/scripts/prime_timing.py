"""Evaluate the primality sentence on domains 1..N and time each run."""
import argparse
import time
from dataclasses import dataclass

from sotc.encoders import is_prime, prime_formula
from sotc.evaluator import EvalOptions, clear_caches, evaluate
from sotc.structures import Structure
from sotc.transforms import Fidelity


@dataclass
class PrimeTimingConfig:
    max_n: int = 11
    fidelity: Fidelity = Fidelity.CORRECTED
    cold: bool = True  # clear memo tables before every n


def run(cfg: PrimeTimingConfig) -> list[dict]:
    phi = prime_formula(cfg.fidelity)
    rows = []
    for n in range(1, cfg.max_n + 1):
        if cfg.cold:
            clear_caches()
        t = time.perf_counter()
        rep = evaluate(Structure(n), phi, EvalOptions(collect_stats=True))
        rows.append(dict(n=n, result=rep.result, prime=is_prime(n), seconds=time.perf_counter() - t,
                         states=rep.states_explored, tc_calls=rep.tc_calls))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=11)
    ap.add_argument("--fidelity", choices=[f.value for f in Fidelity], default=Fidelity.CORRECTED.value)
    ap.add_argument("--warm", action="store_true", help="keep memo tables between domain sizes")
    args = ap.parse_args()
    cfg = PrimeTimingConfig(args.max_n, Fidelity(args.fidelity), not args.warm)
    print(f"{'n':>3} {'formula':>8} {'prime':>6} {'seconds':>9} {'states':>8} {'tc_calls':>9}")
    for r in run(cfg):
        flag = "" if r["result"] == r["prime"] else "  <- differs"
        print(f"{r['n']:>3} {str(r['result']):>8} {str(r['prime']):>6} {r['seconds']:>9.2f} "
              f"{r['states']:>8} {r['tc_calls']:>9}{flag}", flush=True)


if __name__ == "__main__":
    main()
