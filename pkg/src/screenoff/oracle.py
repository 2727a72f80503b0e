"""Pointwise membership decisions for Minkowski region operators.

These work straight from the quantified definitions on a raw list of boxes
and never build canonical regions, so they serve as an independent check on
:mod:`screenoff.minkowski`.

For the closure, ``p in R''`` asks whether some ``q`` in ``R'`` is causally
related to ``p``.  Membership of ``q`` in ``R'`` and its relation to ``p``
only depend on where ``q_u`` and ``q_v`` sit relative to the finitely many
box bounds and the coordinates of ``p``.  Trying one representative per cell
of that threshold grid therefore decides the existential exactly.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Sequence

from .minkowski import Box, Interval


def _reaches_up(iv: Interval, x: Fraction) -> bool:
    """Some element of ``iv`` is >= ``x``."""
    top = iv.hi
    if top.value is None:
        return True
    return x < top.value or (x == top.value and top.closed)


def _reaches_down(iv: Interval, x: Fraction) -> bool:
    """Some element of ``iv`` is <= ``x``."""
    bottom = iv.lo
    if bottom.value is None:
        return True
    return bottom.value < x or (bottom.value == x and bottom.closed)


def in_region(p, boxes: Sequence[Box]) -> bool:
    u, v = p
    return any(b.contains(u, v) for b in boxes)


def in_past(p, boxes: Sequence[Box]) -> bool:
    # exists q in some box with p <= q
    u, v = p
    return any(_reaches_up(b.u, u) and _reaches_up(b.v, v) for b in boxes)


def in_future(p, boxes: Sequence[Box]) -> bool:
    u, v = p
    return any(_reaches_down(b.u, u) and _reaches_down(b.v, v) for b in boxes)


def in_complement(p, boxes: Sequence[Box]) -> bool:
    return not in_past(p, boxes) and not in_future(p, boxes)


def _representatives(values) -> list[Fraction]:
    vals = sorted(set(values))
    if not vals:
        return [Fraction(0)]
    reps = [vals[0] - 1, vals[-1] + 1]
    reps.extend(vals)
    reps.extend((a + b) / 2 for a, b in zip(vals, vals[1:]))
    return reps


def _thresholds(boxes, axis):
    out = []
    for b in boxes:
        iv = b.u if axis == 0 else b.v
        out.extend(x.value for x in (iv.lo, iv.hi) if x.value is not None)
    return out


def in_closure(p, boxes: Sequence[Box]) -> bool:
    u, v = p
    us = _representatives(_thresholds(boxes, 0) + [u])
    vs = _representatives(_thresholds(boxes, 1) + [v])
    for q in product(us, vs):
        related = (q[0] <= u and q[1] <= v) or (u <= q[0] and v <= q[1])
        if related and in_complement(q, boxes):
            return False
    return True


MEMBERSHIP = {
    "region": in_region,
    "past": in_past,
    "future": in_future,
    "complement": in_complement,
    "closure": in_closure,
}


def oracle_membership(p, operator: str, boxes: Sequence[Box]) -> bool:
    """Is rational point ``p = (u, v)`` in ``operator(union of boxes)``?"""
    p = (Fraction(p[0]), Fraction(p[1]))
    return MEMBERSHIP[operator](p, list(boxes))
