"""Print the verdict table for the six separating models, with witnesses.

    python3 scripts/independence_matrix.py [--json]
"""

from __future__ import annotations

import argparse
import json
import time
from dataclasses import dataclass

from structmodels.axioms import check_admissible
from structmodels.constructors import SEPARATING_KINDS, VERDICT_KEYS, separating_model


@dataclass
class Config:
    as_json: bool = False


def run(cfg: Config) -> bool:
    start = time.perf_counter()
    rows = []
    for kind in SEPARATING_KINDS:
        d, expected = separating_model(kind)
        report = check_admissible(d, exhaustive=True)
        observed = {k: v.holds for k, v in report.verdicts().items()}
        bad = report.verdicts()[report.failed()[0]] if report.failed() else None
        rows.append((kind, observed, observed == expected, bad))
    elapsed = time.perf_counter() - start

    if cfg.as_json:
        print(json.dumps([
            {"model": k, "observed": o, "match": m, "witness": b.to_dict() if b is not None else None}
            for k, o, m, b in rows
        ], indent=2))
    else:
        print(f"{'model':<8}" + "".join(f"{k:>7}" for k in VERDICT_KEYS) + "  match  witness")
        for kind, observed, match, bad in rows:
            cells = "".join(f"{'.' if observed[k] else 'FAIL':>7}" for k in VERDICT_KEYS)
            where = f"{bad.name} at {bad.witness}" if bad is not None else ""
            if bad is not None and bad.lhs is not None:
                where += f" ({bad.lhs} vs {bad.rhs})"
            print(f"{kind:<8}{cells}  {str(match):<5}  {where}")
        print(f"\n{len(rows)} models, exhaustive subset mode, {elapsed * 1000:.1f} ms")
    return all(m for _, _, m, _ in rows)


def main() -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--json", dest="as_json", action="store_true")
    return 0 if run(Config(**vars(p.parse_args()))) else 1


if __name__ == "__main__":
    raise SystemExit(main())
