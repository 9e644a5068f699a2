"""JSON and CSV serialization with deterministic formatting.

Behavior files look like::

    {"kind": "conditional", "scenario": {"nA": 2, "nB": 2, "nX": 2, "nY": 2},
     "values": [{"num": 1, "den": 4}, "0.25", ...]}

Values may be ``{"num", "den"}`` objects, ``"p/q"`` or decimal strings, or
plain JSON numbers.  Output always uses sorted keys, rationals as
``{"num", "den"}`` and floats at 17 significant digits.
"""

from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction

from .behaviors import BellScenario, ConditionalBehavior, InputDistribution, JointBehavior
from .numerics import parse_scalar

KINDS = {"conditional": ConditionalBehavior, "joint": JointBehavior, "input": InputDistribution}
FLOAT_DIGITS = 17
CSV_DIGITS = 12


def scalar_to_json(v):
    if isinstance(v, bool):
        return v
    if isinstance(v, (Fraction, int)):
        v = Fraction(v)
        return {"num": v.numerator, "den": v.denominator}
    return float(v)


def scalar_from_json(v):
    if isinstance(v, dict):
        if set(v) != {"num", "den"}:
            raise ValueError(f"rational objects need exactly 'num' and 'den', got {sorted(v)}")
        return parse_scalar(v)
    if isinstance(v, bool) or v is None:
        raise ValueError(f"not a probability value: {v!r}")
    return parse_scalar(v)


def behavior_to_json(table) -> dict:
    return {
        "scenario": table.scenario.as_dict(),
        "kind": table.kind,
        "values": [scalar_to_json(v) for v in table.values],
    }


def behavior_from_json(obj):
    """Build a behavior or input distribution from a parsed JSON object."""
    if not isinstance(obj, dict):
        raise ValueError("behavior JSON must be an object")
    missing = {"scenario", "kind", "values"} - set(obj)
    if missing:
        raise ValueError(f"behavior JSON lacks {', '.join(sorted(missing))}")
    kind = obj["kind"]
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    sc = obj["scenario"]
    if isinstance(sc, str):
        scenario = BellScenario.parse(sc)
    else:
        scenario = BellScenario(**{k: int(sc[k]) for k in ("nA", "nB", "nX", "nY")})
    values = tuple(scalar_from_json(v) for v in obj["values"])
    return KINDS[kind](scenario, values)


def load_behavior(path):
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: malformed JSON ({exc})") from None
    return behavior_from_json(obj)


def _emit(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_emit(obj[k], indent, level + 1)}" for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(x, (dict, list, tuple)) for x in obj):
            return "[" + ", ".join(_emit(x, indent, level + 1) for x in obj) + "]"
        return "[\n" + ",\n".join(pad + _emit(x, indent, level + 1) for x in obj) + "\n" + end + "]"
    if isinstance(obj, Fraction):
        return _emit(scalar_to_json(obj), indent, level)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            raise ValueError(f"cannot write non-finite float {obj!r}")
        return format(obj, f".{FLOAT_DIGITS}g") if obj != int(obj) or abs(obj) >= 1e17 else f"{obj:.1f}"
    return json.dumps(obj)


def dumps(obj, indent: int = 2) -> str:
    """Deterministic JSON text: sorted keys, 17 significant digits, trailing newline."""
    return _emit(_plain(obj), indent, 0) + "\n"


def _plain(obj):
    # numpy scalars and arrays become plain Python values
    if hasattr(obj, "tolist") and not isinstance(obj, (list, tuple)):
        return _plain(obj.tolist())
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return obj


def csv_text(header, rows) -> str:
    """CSV with LF line endings; floats at 12 significant digits, rationals as ``p/q``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_csv_cell(v) for v in row])
    return buf.getvalue()


def _csv_cell(v):
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, float):
        return format(v, f".{CSV_DIGITS}g")
    return v
