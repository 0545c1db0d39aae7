"""JSON datum files.

A datum file is one JSON object with keys in the canonical order
``points, weights, R, I, pi, G, eta, E0``. Rationals are strings such as
``"3/4"`` (integers are also accepted); JSON floats are rejected. ``G`` is an
explicit list of pairs, diagonal included, and duplicate pairs are an error.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

from .core import Datum
from .errors import StructuralError

FIELDS = ("points", "weights", "R", "I", "pi", "G", "eta", "E0")
RATIONAL = re.compile(r"^\s*-?\d+(\s*/\s*\d+)?\s*$")


class DatumParseError(ValueError):
    """A datum or map file could not be read; ``code`` names the failure class."""

    def __init__(self, message: str, code: str, line: int | None = None, path: str | None = None):
        where = f"{path or '<input>'}" + (f":{line}" if line else "")
        super().__init__(f"{where}: {code}: {message}")
        self.code = code
        self.line = line
        self.detail = message


@dataclass(frozen=True)
class _Source:
    text: str
    path: str | None

    def line_of(self, key: str | None) -> int | None:
        if key is None:
            return None
        m = re.search(r'"' + re.escape(key) + r'"\s*:', self.text)
        return self.text.count("\n", 0, m.start()) + 1 if m else None

    def fail(self, message: str, code: str, key: str | None = None) -> DatumParseError:
        return DatumParseError(message, code, self.line_of(key), self.path)


def parse_rational(value: Any, src: _Source, key: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise src.fail(f"{key}: {value!r} is not an exact rational (write it as a \"p/q\" string)",
                       "E_RATIONAL", key)
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str) or not RATIONAL.match(value):
        raise src.fail(f"{key}: cannot read {value!r} as a rational", "E_RATIONAL", key)
    num, _, den = value.partition("/")
    if den and int(den) == 0:
        raise src.fail(f"{key}: zero denominator in {value!r}", "E_RATIONAL", key)
    return Fraction(int(num), int(den) if den else 1)


def _no_duplicate_keys(pairs):
    seen = {}
    for k, v in pairs:
        if k in seen:
            raise ValueError(f"duplicate key {k!r}")
        seen[k] = v
    return seen


def _load_json(src: _Source) -> Any:
    try:
        return json.loads(src.text, object_pairs_hook=_no_duplicate_keys)
    except json.JSONDecodeError as exc:
        raise DatumParseError(exc.msg, "E_SYNTAX", exc.lineno, src.path) from None
    except ValueError as exc:
        raise DatumParseError(str(exc), "E_SYNTAX", None, src.path) from None


def _string_list(obj: Any, key: str, src: _Source) -> list[str]:
    if not isinstance(obj, list) or not all(isinstance(x, str) for x in obj):
        raise src.fail(f"{key} must be a list of point names", "E_SCHEMA", key)
    if len(set(obj)) != len(obj):
        raise src.fail(f"{key} lists a point twice", "E_DUPLICATE", key)
    return obj


def datum_from_text(text: str, path: str | None = None) -> Datum:
    src = _Source(text, path)
    raw = _load_json(src)
    if not isinstance(raw, dict):
        raise src.fail("top level must be a JSON object", "E_SCHEMA")
    missing = [k for k in FIELDS if k not in raw]
    if missing:
        raise src.fail(f"missing field {missing[0]!r}", "E_SCHEMA")
    extra = [k for k in raw if k not in FIELDS]
    if extra:
        raise src.fail(f"unknown field {extra[0]!r}", "E_SCHEMA", extra[0])

    points = _string_list(raw["points"], "points", src)
    known = set(points)
    weights = raw["weights"]
    if not isinstance(weights, dict):
        raise src.fail("weights must map points to rationals", "E_SCHEMA", "weights")
    wq = {p: parse_rational(w, src, "weights") for p, w in weights.items()}
    R = _string_list(raw["R"], "R", src)
    I = _string_list(raw["I"], "I", src)
    pi = raw["pi"]
    if not isinstance(pi, dict) or not all(isinstance(v, str) for v in pi.values()):
        raise src.fail("pi must map points to points", "E_SCHEMA", "pi")
    G = raw["G"]
    if not isinstance(G, list) or not all(
        isinstance(p, list) and len(p) == 2 and all(isinstance(x, str) for x in p) for p in G
    ):
        raise src.fail("G must be a list of [x, y] point pairs", "E_SCHEMA", "G")
    pairs = [tuple(p) for p in G]
    if len(set(pairs)) != len(pairs):
        dup = next(p for p in pairs if pairs.count(p) > 1)
        raise src.fail(f"pair {list(dup)} appears twice in G", "E_DUPLICATE_PAIR", "G")
    for key, names in (("weights", wq), ("R", R), ("I", I), ("pi", list(pi) + list(pi.values())),
                       ("G", [x for p in pairs for x in p])):
        unknown = [x for x in names if x not in known]
        if unknown:
            raise src.fail(f"{key} mentions unknown point {unknown[0]!r}", "E_UNKNOWN_POINT", key)
    eta = parse_rational(raw["eta"], src, "eta")
    E0 = parse_rational(raw["E0"], src, "E0")
    try:
        return Datum.from_labels(points, wq, R, I, pi, pairs, E0, eta)
    except StructuralError as exc:
        key = {
            "E_ETA_RANGE": "eta", "E_E0_RANGE": "E0", "E_OVERLAP_RI": "I",
            "E_NEGATIVE_WEIGHT": "weights", "E_WEIGHTS": "weights", "E_PI_RANGE": "pi",
            "E_PI_TOTAL": "pi", "E_EMPTY": "points", "E_DUPLICATE": "points",
        }.get(exc.code)
        raise src.fail(str(exc), exc.code, key) from None


def parse_datum(path: str | Path) -> Datum:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DatumParseError(exc.strerror or str(exc), "E_IO", None, str(path)) from None
    return datum_from_text(text, str(path))


def datum_to_dict(d: Datum) -> dict:
    """Canonical JSON-ready form (key order is part of the format)."""
    return {
        "points": list(d.labels),
        "weights": {p: str(w) for p, w in zip(d.labels, d.weights)},
        "R": list(d.R.labels()),
        "I": list(d.I.labels()),
        "pi": {p: d.labels[j] for p, j in zip(d.labels, d.pi)},
        "G": [list(p) for p in d.G.pairs()],
        "eta": str(d.eta),
        "E0": str(d.E0),
    }


def datum_to_text(d: Datum) -> str:
    return json.dumps(datum_to_dict(d), indent=2) + "\n"


def write_datum(d: Datum, path: str | Path) -> None:
    Path(path).write_text(datum_to_text(d), encoding="utf-8")


def parse_map(path: str | Path) -> dict[str, str]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DatumParseError(exc.strerror or str(exc), "E_IO", None, str(path)) from None
    src = _Source(text, str(path))
    raw = _load_json(src)
    if not isinstance(raw, dict) or set(raw) != {"map"} or not isinstance(raw["map"], dict):
        raise src.fail('a map file is {"map": {source point: target point}}', "E_SCHEMA")
    m = raw["map"]
    if not all(isinstance(v, str) for v in m.values()):
        raise src.fail("map values must be point names", "E_SCHEMA", "map")
    return m


def digest(*paths: str | Path) -> str:
    h = hashlib.sha256()
    for p in paths:
        h.update(Path(p).read_bytes())
    return h.hexdigest()
