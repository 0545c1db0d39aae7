"""How eta constrains admissible data.

Part one scans probability data (total mass 1) for admissible examples at
positive eta and checks the two-point mass of every eta = 0 hit. Part two
tabulates the feasible eta window for a range of mass bounds M and checks
every canonical eta model against it.

    python3 scripts/eta_window_scan.py --max-n 3
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass, field
from fractions import Fraction

from structmodels.constructors import eta_model, total_relation_model
from structmodels.coupling import eta_feasibility, sigma_global_constraint
from structmodels.search import probability_eta_scan


@dataclass
class Config:
    max_n: int = 3
    grid: list[Fraction] = field(default_factory=lambda: [Fraction(x) for x in ("0", "1/2", "1", "2")])
    scan_etas: list[Fraction] = field(default_factory=lambda: [Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)])
    bounds: list[Fraction] = field(default_factory=lambda: [Fraction(x) for x in ("1/2", "1", "3/2", "2", "4", "10")])


def run(cfg: Config) -> bool:
    ok = True
    print("probability data (mu(X) = 1)")
    for n in range(1, cfg.max_n + 1):
        scan = probability_eta_scan(n, cfg.grid, cfg.scan_etas)
        ok &= scan.holds
        print(f"  n={n}: {scan.data_checked} data, admissible at eta > 0: {len(scan.admissible_positive_eta)},"
              f" admissible at eta = 0: {scan.admissible_eta_zero},"
              f" with mu2(G) != 1: {len(scan.eta_zero_bad_mass)}")

    print("\nfeasible eta window for mu(X) <= M")
    for M in cfg.bounds:
        w = eta_feasibility(M)
        window = f"[{w.lo}, {w.hi}]" if w.feasible else "empty"
        print(f"  M = {str(M):>4}: {window}")

    print("\ncanonical eta models against the window M = mu(X)")
    for eta in (Fraction(0), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(9, 10)):
        for name, d in (("eta", eta_model(eta)), ("total", total_relation_model(eta))):
            gc = sigma_global_constraint(d)
            inside = eta in eta_feasibility(gc.mass_X)
            ok &= gc.holds and inside
            print(f"  {name:<5} eta={str(eta):<4} mu(X)={str(gc.mass_X):<5} mu2(G)={str(gc.mass_G):<6}"
                  f" global constraint {gc.holds}, eta in window {inside}")
    return ok


def main() -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--max-n", type=int, default=3)
    args = p.parse_args()
    return 0 if run(Config(max_n=args.max_n)) else 1


if __name__ == "__main__":
    raise SystemExit(main())
