"""Exact region algebra on the 1+1 Minkowski plane.

Points are written in light-cone coordinates ``u = t + x``, ``v = t - x``,
where ``p <= q`` iff ``u_p <= u_q`` and ``v_p <= v_q``.  Regions are finite
unions of axis-aligned (u, v) boxes with rational, possibly open or infinite,
bounds.  That class is closed under the boolean operations and under taking
causal pasts and futures, so every operator below is exact.

A :class:`MinkRegion` is kept in a canonical vertical-slab form: a sorted
tuple of ``(u_interval, v_intervals)`` pairs with maximal u-intervals and
disjoint, non-adjacent v-intervals.  Two regions are equal as point sets iff
their slab tuples are equal.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence


@dataclass(frozen=True)
class Bound:
    """One end of an interval; ``value=None`` means infinite (never closed)."""

    value: Optional[Fraction]
    closed: bool = False

    def __post_init__(self):
        if self.value is None:
            if self.closed:
                raise ValueError("an infinite bound cannot be closed")
        elif not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))

    @property
    def infinite(self) -> bool:
        return self.value is None

    def flipped(self) -> "Bound":
        if self.value is None:
            return self
        return Bound(self.value, not self.closed)


INF = Bound(None)


def closed(x) -> Bound:
    return Bound(Fraction(x), True)


def opened(x) -> Bound:
    return Bound(Fraction(x), False)


def _nonempty(lo: Bound, hi: Bound) -> bool:
    if lo.value is None or hi.value is None:
        return True
    return lo.value < hi.value or (lo.value == hi.value and lo.closed and hi.closed)


@dataclass(frozen=True)
class Interval:
    """A nonempty interval of the real line."""

    lo: Bound = INF
    hi: Bound = INF

    def __post_init__(self):
        if not _nonempty(self.lo, self.hi):
            raise ValueError(f"empty interval {self}")

    def __str__(self):
        left = "(-inf" if self.lo.infinite else ("[" if self.lo.closed else "(") + str(self.lo.value)
        right = "+inf)" if self.hi.infinite else str(self.hi.value) + ("]" if self.hi.closed else ")")
        return f"{left}, {right}"

    def contains(self, x: Fraction) -> bool:
        lo, hi = self.lo, self.hi
        if lo.value is not None and (x < lo.value or (x == lo.value and not lo.closed)):
            return False
        if hi.value is not None and (x > hi.value or (x == hi.value and not hi.closed)):
            return False
        return True


LINE = Interval()


def _lo_key(b: Bound):
    # smaller key = starts further left; a closed lower end starts before an open one
    return (0,) if b.value is None else (1, b.value, 0 if b.closed else 1)


def _hi_key(b: Bound):
    return (2,) if b.value is None else (1, b.value, 1 if b.closed else 0)


def _touches(hi: Bound, lo: Bound) -> bool:
    """Whether an interval ending at ``hi`` meets or abuts one starting at ``lo``."""
    if hi.value is None or lo.value is None:
        return True
    return hi.value > lo.value or (hi.value == lo.value and (hi.closed or lo.closed))


def _meet(a: Interval, b: Interval) -> Optional[Interval]:
    lo = max(a.lo, b.lo, key=_lo_key)
    hi = min(a.hi, b.hi, key=_hi_key)
    return Interval(lo, hi) if _nonempty(lo, hi) else None


# 1-D interval sets: sorted tuples of disjoint, non-adjacent intervals

IntervalSet = tuple


def iset_union(intervals: Iterable[Interval]) -> IntervalSet:
    out: list[Interval] = []
    for iv in sorted(intervals, key=lambda iv: _lo_key(iv.lo)):
        if out and _touches(out[-1].hi, iv.lo):
            last = out[-1]
            out[-1] = Interval(last.lo, max(last.hi, iv.hi, key=_hi_key))
        else:
            out.append(iv)
    return tuple(out)


def iset_intersect(a: IntervalSet, b: IntervalSet) -> IntervalSet:
    return iset_union(m for x in a for y in b if (m := _meet(x, y)) is not None)


def iset_complement(a: IntervalSet) -> IntervalSet:
    out = []
    lo = INF
    for iv in a:
        if iv.lo.value is not None and _nonempty(lo, iv.lo.flipped()):
            out.append(Interval(lo, iv.lo.flipped()))
        if iv.hi.value is None:
            return tuple(out)
        lo = iv.hi.flipped()
    out.append(Interval(lo, INF))
    return tuple(out)


def iset_difference(a: IntervalSet, b: IntervalSet) -> IntervalSet:
    return iset_intersect(a, iset_complement(b))


# 2-D regions


@dataclass(frozen=True)
class Box:
    u_lo: Bound = INF
    u_hi: Bound = INF
    v_lo: Bound = INF
    v_hi: Bound = INF

    def __post_init__(self):
        if not (_nonempty(self.u_lo, self.u_hi) and _nonempty(self.v_lo, self.v_hi)):
            raise ValueError(f"empty box {self}")

    @property
    def u(self) -> Interval:
        return Interval(self.u_lo, self.u_hi)

    @property
    def v(self) -> Interval:
        return Interval(self.v_lo, self.v_hi)

    @classmethod
    def of(cls, u: Interval, v: Interval) -> "Box":
        return cls(u.lo, u.hi, v.lo, v.hi)

    def contains(self, u: Fraction, v: Fraction) -> bool:
        return self.u.contains(u) and self.v.contains(v)


def make_box(u_lo=None, u_hi=None, v_lo=None, v_hi=None) -> Optional[Box]:
    """Box from four bounds (``None`` = unbounded), or ``None`` if empty."""
    bounds = [b if b is not None else INF for b in (u_lo, u_hi, v_lo, v_hi)]
    if _nonempty(bounds[0], bounds[1]) and _nonempty(bounds[2], bounds[3]):
        return Box(*bounds)
    return None


Slab = tuple  # (Interval, IntervalSet)


@dataclass(frozen=True)
class MinkRegion:
    slabs: tuple = ()

    @property
    def is_empty(self) -> bool:
        return not self.slabs

    def boxes(self) -> list[Box]:
        return [Box.of(u, v) for u, vs in self.slabs for v in vs]

    def contains(self, u, v) -> bool:
        u, v = Fraction(u), Fraction(v)
        for ui, vs in self.slabs:
            if ui.contains(u):
                return any(iv.contains(v) for iv in vs)
        return False

    def __or__(self, other):
        return region_union(self, other)

    def __and__(self, other):
        return region_intersect(self, other)

    def __sub__(self, other):
        return region_difference(self, other)

    def __str__(self):
        from .regionexpr import format_region

        return format_region(self)


EMPTY = MinkRegion()


def _pieces(breaks: Sequence[Fraction]) -> list[tuple[Interval, Fraction]]:
    """Elementary u-pieces for sorted breakpoints, each with a sample point."""
    if not breaks:
        return [(LINE, Fraction(0))]
    out = [(Interval(INF, opened(breaks[0])), breaks[0] - 1)]
    for i, b in enumerate(breaks):
        out.append((Interval(closed(b), closed(b)), b))
        if i + 1 < len(breaks):
            nxt = breaks[i + 1]
            out.append((Interval(opened(b), opened(nxt)), (b + nxt) / 2))
    out.append((Interval(opened(breaks[-1]), INF), breaks[-1] + 1))
    return out


def _breaks(intervals: Iterable[Interval]) -> list[Fraction]:
    vals = set()
    for iv in intervals:
        if iv.lo.value is not None:
            vals.add(iv.lo.value)
        if iv.hi.value is not None:
            vals.add(iv.hi.value)
    return sorted(vals)


def _assemble(sections: list[tuple[Interval, IntervalSet]]) -> MinkRegion:
    """Merge consecutive elementary pieces with identical nonempty sections."""
    slabs = []
    run_lo = run_hi = run_set = None
    for piece, vs in sections:
        if run_set is not None and vs == run_set:
            run_hi = piece.hi
            continue
        if run_set:
            slabs.append((Interval(run_lo, run_hi), run_set))
        run_lo, run_hi, run_set = piece.lo, piece.hi, vs
    if run_set:
        slabs.append((Interval(run_lo, run_hi), run_set))
    return MinkRegion(tuple(slabs))


def _section(region_slabs, u: Fraction) -> IntervalSet:
    for ui, vs in region_slabs:
        if ui.contains(u):
            return vs
    return ()


def normalize(boxes: Iterable[Box]) -> MinkRegion:
    """Canonical region for the union of ``boxes``."""
    boxes = list(boxes)
    sections = []
    for piece, u in _pieces(_breaks(b.u for b in boxes)):
        sections.append((piece, iset_union(b.v for b in boxes if b.u.contains(u))))
    return _assemble(sections)


def _combine(a: MinkRegion, b: MinkRegion, op: Callable) -> MinkRegion:
    breaks = _breaks([ui for ui, _ in a.slabs] + [ui for ui, _ in b.slabs])
    sections = []
    for piece, u in _pieces(breaks):
        sections.append((piece, op(_section(a.slabs, u), _section(b.slabs, u))))
    return _assemble(sections)


def region_union(a: MinkRegion, b: MinkRegion) -> MinkRegion:
    return _combine(a, b, lambda x, y: iset_union(x + y))


def region_intersect(a: MinkRegion, b: MinkRegion) -> MinkRegion:
    return _combine(a, b, iset_intersect)


def region_difference(a: MinkRegion, b: MinkRegion) -> MinkRegion:
    return _combine(a, b, iset_difference)


PLANE = normalize([Box()])


def causal_past(region: MinkRegion) -> MinkRegion:
    """Down-set: each box contributes (-inf, sup u] x (-inf, sup v]."""
    return normalize(Box(INF, u.hi, INF, v.hi) for u, vs in region.slabs for v in vs)


def causal_future(region: MinkRegion) -> MinkRegion:
    return normalize(Box(u.lo, INF, v.lo, INF) for u, vs in region.slabs for v in vs)


def spacelike_complement(region: MinkRegion) -> MinkRegion:
    """Points spacelike to every point of ``region``."""
    return region_difference(PLANE, region_union(causal_past(region), causal_future(region)))


def causal_closure(region: MinkRegion) -> MinkRegion:
    return spacelike_complement(spacelike_complement(region))


def contains_own_past(region: MinkRegion) -> bool:
    return region_difference(causal_past(region), region).is_empty


def is_causally_infinite_rsp(region: MinkRegion) -> bool:
    """Whether the causal closure of ``region`` contains its own causal past."""
    return contains_own_past(causal_closure(region))


OPERATORS = {
    "past": causal_past,
    "future": causal_future,
    "complement": spacelike_complement,
    "closure": causal_closure,
}
