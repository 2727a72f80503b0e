"""JSON model files.

General form::

    {
      "points": ["x", "a", "b"],
      "relations": [["x", "a"], ["x", "b"]],
      "outcomes": ["1", "2", "3", "4"],
      "measure": {"1": "1/4", "2": "1/4", "3": "1/4", "4": "1/4"},
      "partitions": {"x": [["1", "4"], ["2", "3"]], "a": [["1", "2"], ["3", "4"]]},
      "events": {"A": ["1", "2"]}
    }

Points left out of ``partitions`` get the trivial partition.  Outcomes left
out of ``measure`` get weight zero.

Product form: ``outcomes`` maps every point to its list of local values.  The
sample space is then the product, an outcome is named by its local values
joined with commas in ``points`` order (``"0,1,1"``), each point's partition
is by its own coordinate, and ``partitions`` must be absent.
"""
from __future__ import annotations

import itertools
import json
import re
from fractions import Fraction
from pathlib import Path

from .causal_order import CycleError, build_causal_set
from .stochastic import ModelError, StochasticCausalModel, fraction_str, validate_model

KEYS = {"points", "relations", "outcomes", "measure", "partitions", "events"}
REQUIRED = ("points", "outcomes", "measure")


class ModelFileError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        where = f"line {line}: " if line else ""
        super().__init__(where + message)
        self.line = line


class _FieldError(ValueError):
    """A problem that can be pinned to a JSON string token in the file."""

    def __init__(self, message: str, token: str | None = None):
        super().__init__(message)
        self.token = token


def _line_of(text: str, token: str) -> int | None:
    m = re.search(re.escape(json.dumps(token)), text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def _rational(value, where: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise _FieldError(f"{where}: weight must be a 'num/den' string or an integer", "measure")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise _FieldError(f"{where}: {value!r} is not a rational number", value) from None


def model_from_dict(data: dict) -> tuple[StochasticCausalModel, dict]:
    """Model plus named events (label -> frozenset of outcomes); raises ValueError."""
    if not isinstance(data, dict):
        raise ValueError("model file must hold a JSON object")
    unknown = set(data) - KEYS
    if unknown:
        key = sorted(unknown)[0]
        raise _FieldError(f"unknown key {key!r}", key)
    for key in REQUIRED:
        if key not in data:
            raise ValueError(f"missing key {key!r}")
    points = data["points"]
    if not isinstance(points, list) or not all(isinstance(p, str) for p in points):
        raise ValueError("'points' must be a list of strings")
    relations = data.get("relations", [])
    if not all(isinstance(r, list) and len(r) == 2 for r in relations):
        raise ValueError("'relations' must be a list of [earlier, later] pairs")
    site = build_causal_set(points, [tuple(r) for r in relations])

    outcomes = data["outcomes"]
    if isinstance(outcomes, dict):
        if "partitions" in data:
            raise ValueError("'partitions' cannot be combined with per-point 'outcomes'")
        missing = [p for p in points if p not in outcomes]
        if missing or set(outcomes) - set(points):
            raise ValueError("per-point 'outcomes' must list exactly the points")
        values = [[str(x) for x in outcomes[p]] for p in points]
        labels = [",".join(combo) for combo in itertools.product(*values)]
        partitions = {}
        for i, p in enumerate(points):
            partitions[p] = [
                [lab for lab in labels if lab.split(",")[i] == x] for x in values[i]
            ]
    elif isinstance(outcomes, list):
        labels = [str(w) for w in outcomes]
        partitions = data.get("partitions", {})
        if not isinstance(partitions, dict):
            raise ValueError("'partitions' must map points to lists of outcome lists")
    else:
        raise ValueError("'outcomes' must be a list of labels or a per-point mapping")

    measure_raw = data["measure"]
    if not isinstance(measure_raw, dict):
        raise ValueError("'measure' must map outcomes to 'num/den' strings")
    measure = {w: _rational(x, f"measure[{w!r}]") for w, x in measure_raw.items()}
    try:
        m = StochasticCausalModel.create(site, labels, measure, partitions)
    except ModelError as exc:
        raise _FieldError(str(exc), "partitions" if "partition" in str(exc) else "measure") from None
    errors = validate_model(m)
    if errors:
        raise _FieldError("; ".join(errors), "partitions" if "partition" in errors[0] else "measure")
    events = {}
    for name, ev in data.get("events", {}).items():
        stray = set(ev) - set(labels)
        if stray:
            raise _FieldError(f"event {name!r} uses unknown outcomes {sorted(stray)}", name)
        events[name] = frozenset(ev)
    return m, events


def loads_model(text: str) -> tuple[StochasticCausalModel, dict]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFileError(exc.msg, exc.lineno) from None
    try:
        return model_from_dict(data)
    except _FieldError as exc:
        raise ModelFileError(str(exc), exc.token and _line_of(text, exc.token)) from None
    except (ValueError, CycleError) as exc:
        raise ModelFileError(str(exc)) from None


def load_model(path) -> tuple[StochasticCausalModel, dict]:
    return loads_model(Path(path).read_text())


def model_to_dict(m: StochasticCausalModel, events: dict | None = None) -> dict:
    out = m.site.to_dict()
    out["outcomes"] = list(m.outcomes)
    out["measure"] = {w: fraction_str(x) for w, x in zip(m.outcomes, m.weights)}
    out["partitions"] = {
        p: [sorted(b, key=m.outcomes.index) for b in blocks]
        for p, blocks in zip(m.site.points, m.partitions)
        if len(blocks) > 1
    }
    if events:
        out["events"] = {k: sorted(v, key=m.outcomes.index) for k, v in events.items()}
    return out


def dumps_model(m: StochasticCausalModel, events: dict | None = None) -> str:
    return json.dumps(model_to_dict(m, events), indent=2)
