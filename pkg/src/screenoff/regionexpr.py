"""Text syntax for Minkowski regions.

Grammar::

    region := conj ("|" conj)*
    conj   := atom ("&" atom)*
    atom   := ("u" | "v") op rational  |  "all"  |  "empty"
    op     := "<" | "<=" | ">" | ">=" | "=" | "=="

Rationals are written ``3``, ``-1/2`` or ``0.25`` and are parsed exactly.
Example: ``u>=0 & v<=0 & u<=1``.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .minkowski import INF, EMPTY, Bound, Interval, MinkRegion, _hi_key, _lo_key, make_box, normalize


class RegionParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


_TOKEN = re.compile(
    r"\s*(?:(?P<axis>[uv])\s*(?P<op><=|>=|==|<|>|=)\s*(?P<num>[-+]?\d+(?:/\d+|\.\d+)?)"
    r"|(?P<kw>all|empty)|(?P<sep>[&|]))"
)


def parse_region(text: str) -> MinkRegion:
    boxes = []
    bounds = _fresh()
    expect_atom = True
    pos = 0
    text = text.rstrip()
    if not text.strip():
        raise RegionParseError("empty expression", 0)
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise RegionParseError(f"unexpected input {text[pos:pos + 10].strip()!r}", pos)
        start = m.start() + len(m.group(0)) - len(m.group(0).lstrip())
        if m.group("sep"):
            if expect_atom:
                raise RegionParseError(f"expected a constraint before {m.group('sep')!r}", start)
            if m.group("sep") == "|":
                boxes.append(bounds)
                bounds = _fresh()
            expect_atom = True
        else:
            if not expect_atom:
                raise RegionParseError("expected '&' or '|'", start)
            if m.group("kw") == "empty":
                bounds["empty"] = True
            elif m.group("axis"):
                _tighten(bounds, m.group("axis"), m.group("op"), Fraction(m.group("num")))
            expect_atom = False
        pos = m.end()
    if expect_atom:
        raise RegionParseError("expression ends with an operator", len(text))
    boxes.append(bounds)
    out = []
    for b in boxes:
        if b["empty"]:
            continue
        box = make_box(b["u"][0], b["u"][1], b["v"][0], b["v"][1])
        if box is not None:
            out.append(box)
    return normalize(out)


def _fresh():
    return {"u": [INF, INF], "v": [INF, INF], "empty": False}


def _tighten(bounds, axis, op, q):
    lo, hi = bounds[axis]
    if op in (">", ">=", "=", "=="):
        new = Bound(q, op != ">")
        lo = max(lo, new, key=_lo_key)
    if op in ("<", "<=", "=", "=="):
        new = Bound(q, op != "<")
        hi = min(hi, new, key=_hi_key)
    bounds[axis] = [lo, hi]


def _axis_atoms(axis: str, iv: Interval) -> list[str]:
    lo, hi = iv.lo, iv.hi
    if lo.value is not None and lo == hi:
        return [f"{axis}={lo.value}"]
    atoms = []
    if lo.value is not None:
        atoms.append(f"{axis}{'>=' if lo.closed else '>'}{lo.value}")
    if hi.value is not None:
        atoms.append(f"{axis}{'<=' if hi.closed else '<'}{hi.value}")
    return atoms


def format_region(region: MinkRegion) -> str:
    if region == EMPTY:
        return "empty"
    conjs = []
    for u, vs in region.slabs:
        for v in vs:
            atoms = _axis_atoms("u", u) + _axis_atoms("v", v)
            conjs.append(" & ".join(atoms) if atoms else "all")
    return " | ".join(conjs)
