"""Command-line front end: datum files in, JSON reports out.

Exit codes: 0 success (admissible, verdict holds), 1 a verdict failed,
2 an input file could not be parsed, 3 a search budget was exceeded,
4 an operation's hypotheses were not met, 64 bad command-line usage.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from . import __version__
from .axioms import check_admissible, check_axiom_I, check_axiom_II
from .classify import check_block_dichotomy, equivalence_classes
from .constructors import (
    SEPARATING_KINDS,
    block_family_model,
    class_model,
    countable_truncation,
    diagonal_finite_model,
    eta_model,
    fiber_mass_example,
    separating_model,
    total_relation_model,
)
from .core import Datum, Q
from .coupling import (
    SetFunction,
    check_identification,
    eta_feasibility,
    fixed_point_closed_form,
    iterate_T,
    sigma_global_constraint,
)
from .datum_io import DatumParseError, datum_to_dict, datum_to_text, digest, parse_datum, parse_map
from .errors import BudgetExceeded, DomainError, PreconditionError, StructuralError
from .morphisms import Morphism, check_morphism, transport_coupling
from .quotient import restrict
from .search import enumerate_admissible

EXIT_OK = 0
EXIT_VERDICT = 1
EXIT_PARSE = 2
EXIT_BUDGET = 3
EXIT_PRECONDITION = 4
EXIT_USAGE = 64

SCHEMA = "structmodels.report/1"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _rational(text: str) -> Fraction:
    try:
        return Q(text)
    except (ValueError, ZeroDivisionError, TypeError):
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from None


def _rationals(text: str) -> list[Fraction]:
    return [_rational(t) for t in text.split(",") if t.strip()]


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of integers: {text!r}") from None


def _envelope(inputs: Sequence[str], body: dict) -> dict:
    return {
        "schema": SCHEMA,
        "meta": {"tool_version": __version__, "input_sha256": digest(*inputs) if inputs else None},
        **body,
    }


def _emit(obj: dict | str, out: str | None) -> None:
    text = obj if isinstance(obj, str) else json.dumps(obj, indent=2) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _atoms(f: SetFunction) -> dict[str, str]:
    return {k: str(v) for k, v in f.by_label().items()}


# -- subcommands ------------------------------------------------------------

def cmd_check(args) -> int:
    d = parse_datum(args.datum)
    report = check_admissible(d, exhaustive=args.exhaustive)
    _emit(_envelope([args.datum], report.to_dict()), args.output)
    return EXIT_OK if report.admissible else EXIT_VERDICT


def cmd_fixpoint(args) -> int:
    d = parse_datum(args.datum)
    f0 = SetFunction.of_charge(d) if args.start == "mu" else SetFunction.zero(d.universe)
    traj = iterate_T(d, f0, args.steps)
    body: dict = {
        "eta": str(d.eta),
        "fixed_point": _atoms(traj.fixed_point),
        "start": args.start,
        "iterations": [
            {"n": k + 1, "error": str(e), "bound": str(b)}
            for k, (e, b) in enumerate(zip(traj.errors, traj.bounds))
        ],
    }
    status = EXIT_OK
    if check_axiom_II(d).holds:
        ident = check_identification(d)
        body["identification"] = ident.to_dict()
        status = EXIT_OK if ident.holds else EXIT_VERDICT
    _emit(_envelope([args.datum], body), args.output)
    return status


def cmd_classify(args) -> int:
    d = parse_datum(args.datum)
    body: dict = {}
    target = d
    if not d.is_identity_retraction():
        target = restrict(d)
        body["classified"] = "core"
    else:
        body["classified"] = "datum"
    blocks = equivalence_classes(target.G).with_masses(target)
    report = check_block_dichotomy(target)
    body.update(blocks.to_dict())
    body["dichotomy"] = report.to_dict()
    _emit(_envelope([args.datum], body), args.output)
    return EXIT_OK if report.holds else EXIT_VERDICT


def cmd_restrict(args) -> int:
    d = parse_datum(args.datum)
    _emit(datum_to_text(restrict(d)), args.output)
    return EXIT_OK


def cmd_morphism(args) -> int:
    src, tgt = parse_datum(args.source), parse_datum(args.target)
    phi = Morphism.from_labels(src, tgt, parse_map(args.map))
    report = check_morphism(phi, exhaustive=args.exhaustive)
    body = report.to_dict()
    status = EXIT_OK if report.holds else EXIT_VERDICT
    if args.transport:
        t = transport_coupling(phi, args.transport)
        body["transport"] = {
            "mode": t.mode,
            "holds": t.holds,
            "values": {k: {"target_load": str(a), "source_load": str(b)} for k, (a, b) in t.values.items()},
            "strict": list(t.strict),
        }
        if not t.holds:
            status = EXIT_VERDICT
    _emit(_envelope([args.source, args.target, args.map], body), args.output)
    return status


def _blocks_arg(text: str) -> list[list[Fraction]]:
    return [_rationals(part) for part in text.split("|")]


CONSTRUCT_FAMILIES = ("diagonal", "eta", "total", "blocks", "class", "truncation", "separating", "fiber-mass")


def cmd_construct(args) -> int:
    fam = args.family

    def need(name: str):
        value = getattr(args, name)
        if value is None:
            raise UsageError(f"construct {fam} needs --{name.replace('_', '-')}")
        return value

    if fam == "diagonal":
        d = diagonal_finite_model(need("nR"), args.nI or 0, need("weights"))
    elif fam == "eta":
        d = eta_model(need("eta"))
    elif fam == "total":
        d = total_relation_model(need("eta"))
    elif fam == "blocks":
        d = block_family_model(need("sizes"), _blocks_arg(need("block_weights")), need("eta"))
    elif fam == "class":
        d = class_model(need("sizes"), need("weights"), args.eta or 0)
    elif fam == "truncation":
        base = parse_datum(args.base) if args.base else diagonal_finite_model(2, 1, (1, 1))
        d = countable_truncation(base, need("extra"))
    elif fam == "separating":
        d, _ = separating_model(need("kind"))
    else:
        d = fiber_mass_example(args.mass if args.mass is not None else 1)
    _emit(datum_to_text(d), args.output)
    return EXIT_OK


def independence_matrix() -> list[dict]:
    rows = []
    for kind in SEPARATING_KINDS:
        d, expected = separating_model(kind)
        report = check_admissible(d)
        observed = {k: v.holds for k, v in report.verdicts().items()}
        rows.append({
            "model": kind,
            "expected": expected,
            "observed": observed,
            "match": observed == expected,
            "failed": report.failed(),
            "witnesses": {k: v.to_dict() for k, v in report.verdicts().items() if not v.holds},
        })
    return rows


def cmd_independence(args) -> int:
    start = time.perf_counter()
    rows = independence_matrix()
    ok = all(r["match"] for r in rows)
    body = {"rows": rows, "all_match": ok, "seconds": round(time.perf_counter() - start, 4)}
    if args.table:
        keys = ("I", "II", "III_a", "III_b", "III_c")
        lines = ["model   " + " ".join(f"{k:>6}" for k in keys) + "  match"]
        for r in rows:
            cells = " ".join(f"{'pass' if r['observed'][k] else 'FAIL':>6}" for k in keys)
            lines.append(f"{r['model']:<7} {cells}  {r['match']}")
        _emit("\n".join(lines) + "\n", args.output)
    else:
        _emit(_envelope([], body), args.output)
    return EXIT_OK if ok else EXIT_VERDICT


def cmd_search(args) -> int:
    result = enumerate_admissible(args.n, args.eta, args.grid, args.relations, args.budget)
    out = open(args.output, "w", encoding="utf-8") if args.output else sys.stdout
    try:
        for d in result.admissible:
            out.write(json.dumps({"type": "datum", "datum": datum_to_dict(d)}) + "\n")
        out.write(json.dumps(result.summary()) + "\n")
    finally:
        if args.output:
            out.close()
    return EXIT_OK if not result.dichotomy_discrepancies else EXIT_VERDICT


def cmd_sigma(args) -> int:
    d = parse_datum(args.datum)
    gc = sigma_global_constraint(d)
    M = args.M if args.M is not None else gc.mass_X
    body = {"global_constraint": gc.to_dict()}
    if M > 0:
        window = eta_feasibility(M)
        body["eta_window"] = window.to_dict()
        body["eta_in_window"] = d.eta in window
    _emit(_envelope([args.datum], body), args.output)
    return EXIT_OK if gc.holds else EXIT_VERDICT


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="structmodels", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, func: Callable, help: str, datum: bool = True) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help)
        if datum:
            sp.add_argument("datum", help="datum JSON file")
        sp.add_argument("-o", "--output", help="write the result here instead of stdout")
        sp.set_defaults(func=func)
        return sp

    sp = add("check", cmd_check, "decide Axioms I-III")
    sp.add_argument("--exhaustive", action="store_true", help="check III(b)/(c) on every subset (n <= 16)")

    sp = add("fixpoint", cmd_fixpoint, "closed-form fixed point and iteration bounds")
    sp.add_argument("--steps", type=int, default=12)
    sp.add_argument("--start", choices=("zero", "mu"), default="zero")

    add("classify", cmd_classify, "G-classes, masses and the block dichotomy")
    add("restrict", cmd_restrict, "emit the identity-retraction core as a datum file")

    sp = sub.add_parser("morphism", help="check (M1)-(M4) for a map between two data")
    sp.add_argument("source")
    sp.add_argument("target")
    sp.add_argument("map", help='JSON file {"map": {...}}')
    sp.add_argument("--exhaustive", action="store_true")
    sp.add_argument("--transport", choices=("inclusion", "exact"))
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_morphism)

    sp = add("construct", cmd_construct, "write a canonical model as a datum file", datum=False)
    sp.add_argument("family", choices=CONSTRUCT_FAMILIES)
    sp.add_argument("--eta", type=_rational)
    sp.add_argument("--nR", type=int)
    sp.add_argument("--nI", type=int)
    sp.add_argument("--weights", type=_ints, help="0/1 flags, comma separated")
    sp.add_argument("--sizes", type=_ints, help="block or class sizes, comma separated")
    sp.add_argument("--block-weights", help='per-block weights, e.g. "1,0|1/2,1/2"')
    sp.add_argument("--extra", type=int)
    sp.add_argument("--base", help="base datum file for truncation")
    sp.add_argument("--kind", choices=SEPARATING_KINDS)
    sp.add_argument("--mass", type=_rational)

    sp = add("independence", cmd_independence, "run all six separating models", datum=False)
    sp.add_argument("--table", action="store_true", help="plain-text table instead of JSON")

    sp = add("search", cmd_search, "enumerate admissible identity-retraction data", datum=False)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--eta", type=_rational, default=Fraction(0))
    sp.add_argument("--grid", type=_rationals, default=[Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2)])
    sp.add_argument("--budget", type=int, default=10**7)
    sp.add_argument("--relations", choices=("axiom_ii", "all"), default="axiom_ii")

    sp = add("sigma", cmd_sigma, "global constraint and the feasible eta window")
    sp.add_argument("--M", type=_rational, help="mass bound (default: mu(X))")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"structmodels: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DatumParseError as exc:
        print(f"structmodels: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except BudgetExceeded as exc:
        print(f"structmodels: budget: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (PreconditionError, DomainError) as exc:
        print(f"structmodels: precondition: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except StructuralError as exc:
        print(f"structmodels: {exc.code}: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    raise SystemExit(main())
