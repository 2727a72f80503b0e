"""Finite causal sets and the region operators used on them.

A causal set here is a finite set of labelled points with a reflexive
partial order ``p <= q`` ("p can causally influence q").  Internally each
point gets an index and the order is stored as bitmasks (``down[i]`` is the
mask of points below ``i``), so every region operator is a handful of
integer operations.  The public functions accept any iterable of labels as a
region and return :class:`Region` values.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Iterator, Sequence


class CycleError(ValueError):
    """The given relations close up into a causal loop."""


class NotSpacelike(ValueError):
    """Two regions were required to be spacelike separated but are not."""


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class CausalSet:
    """A finite set of points with a reflexive, transitively closed order.

    Build instances with :func:`build_causal_set`; the constructor assumes
    ``down``/``up`` are already closed.
    """

    points: tuple
    down: tuple[int, ...] = field(repr=False)
    up: tuple[int, ...] = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {p: i for i, p in enumerate(self.points)})

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.points)) - 1

    @property
    def relation(self) -> frozenset:
        """All pairs ``(p, q)`` with ``p <= q``, including the diagonal."""
        pts = self.points
        return frozenset(
            (pts[i], pts[j]) for j in range(self.n) for i in iter_bits(self.down[j])
        )

    def index(self, label: Hashable) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"{label!r} is not a point of this causal set") from None

    def precedes(self, p: Hashable, q: Hashable) -> bool:
        return bool(self.down[self.index(q)] >> self.index(p) & 1)

    def mask_of(self, labels: Iterable[Hashable]) -> int:
        mask = 0
        for p in labels:
            mask |= 1 << self.index(p)
        return mask

    def labels_of(self, mask: int) -> frozenset:
        return frozenset(self.points[i] for i in iter_bits(mask))

    def region(self, labels: Iterable[Hashable] = ()) -> "Region":
        return Region(self, labels)

    # mask-level operators; these are what the sweeps call in their inner loops

    def past_mask(self, mask: int) -> int:
        out = 0
        for i in iter_bits(mask):
            out |= self.down[i]
        return out

    def future_mask(self, mask: int) -> int:
        out = 0
        for i in iter_bits(mask):
            out |= self.up[i]
        return out

    def complement_mask(self, mask: int) -> int:
        return self.full_mask & ~(self.past_mask(mask) | self.future_mask(mask))

    def closure_mask(self, mask: int) -> int:
        return self.complement_mask(self.complement_mask(mask))

    def spacelike_masks(self, a: int, b: int) -> bool:
        return not (self.past_mask(a) | self.future_mask(a)) & b

    def to_dict(self) -> dict:
        pts = self.points
        pairs = sorted(
            (i, j) for j in range(self.n) for i in iter_bits(self.down[j]) if i != j
        )
        return {"points": list(pts), "relations": [[pts[i], pts[j]] for i, j in pairs]}

    @classmethod
    def from_dict(cls, data: dict) -> "CausalSet":
        return build_causal_set(data["points"], [tuple(r) for r in data.get("relations", ())])


class Region(frozenset):
    """A set of points of a particular causal set."""

    __slots__ = ("site",)

    def __new__(cls, site: CausalSet, members: Iterable[Hashable] = ()):
        members = frozenset(members)
        missing = [p for p in members if p not in site._index]
        if missing:
            raise ValueError(f"points {sorted(map(str, missing))} are not on the site")
        self = super().__new__(cls, members)
        self.site = site
        return self

    def __reduce__(self):
        return (Region, (self.site, frozenset(self)))

    @property
    def mask(self) -> int:
        return self.site.mask_of(self)

    def __repr__(self):
        return f"Region({sorted(self, key=self.site.index)!r})"


def build_causal_set(
    points: Sequence[Hashable], relations: Iterable[tuple[Hashable, Hashable]] = ()
) -> CausalSet:
    """Reflexive-transitive closure of ``relations`` over ``points``.

    Raises :class:`CycleError` if the closure is not antisymmetric.
    """
    points = tuple(points)
    if len(set(points)) != len(points):
        raise ValueError("point labels must be distinct")
    index = {p: i for i, p in enumerate(points)}
    n = len(points)
    down = [1 << i for i in range(n)]
    for p, q in relations:
        if p not in index or q not in index:
            raise ValueError(f"relation ({p!r}, {q!r}) mentions an unknown point")
        down[index[q]] |= 1 << index[p]
    # Warshall on bit rows: if k <= j then everything below k is below j
    for k in range(n):
        bit = 1 << k
        for j in range(n):
            if down[j] & bit:
                down[j] |= down[k]
    for j in range(n):
        for i in iter_bits(down[j]):
            if i != j and down[i] >> j & 1:
                raise CycleError(f"{points[i]!r} and {points[j]!r} precede each other")
    up = [0] * n
    for j in range(n):
        for i in iter_bits(down[j]):
            up[i] |= 1 << j
    return CausalSet(points, tuple(down), tuple(up))


def _mask(site: CausalSet, region: Iterable[Hashable]) -> int:
    return site.mask_of(region)


def _region(site: CausalSet, mask: int) -> Region:
    return Region(site, site.labels_of(mask))


def causal_past(site: CausalSet, region: Iterable[Hashable]) -> Region:
    """J-(R): every point below some point of ``region``."""
    return _region(site, site.past_mask(_mask(site, region)))


def causal_future(site: CausalSet, region: Iterable[Hashable]) -> Region:
    return _region(site, site.future_mask(_mask(site, region)))


def spacelike_complement(site: CausalSet, region: Iterable[Hashable]) -> Region:
    """R': points incomparable with every point of ``region``."""
    return _region(site, site.complement_mask(_mask(site, region)))


def causal_closure(site: CausalSet, region: Iterable[Hashable]) -> Region:
    return _region(site, site.closure_mask(_mask(site, region)))


def is_causally_infinite_rsp(site: CausalSet, region: Iterable[Hashable]) -> bool:
    """True when the causal closure of ``region`` contains its own past."""
    closure = site.closure_mask(_mask(site, region))
    return site.past_mask(closure) & ~closure == 0


def are_spacelike(site: CausalSet, a: Iterable[Hashable], b: Iterable[Hashable]) -> bool:
    return site.spacelike_masks(_mask(site, a), _mask(site, b))


def _require_spacelike(site, a, b):
    if not site.spacelike_masks(a, b):
        raise NotSpacelike(
            f"{sorted(map(str, site.labels_of(a)))} and "
            f"{sorted(map(str, site.labels_of(b)))} are causally connected"
        )


def mutual_past(site: CausalSet, a: Iterable[Hashable], b: Iterable[Hashable]) -> Region:
    """P1 = J-(A) & J-(B)."""
    a, b = _mask(site, a), _mask(site, b)
    _require_spacelike(site, a, b)
    return _region(site, site.past_mask(a) & site.past_mask(b))


def joint_past(site: CausalSet, a: Iterable[Hashable], b: Iterable[Hashable]) -> Region:
    """P2 = (J-(A) | J-(B)) minus (A | B)."""
    a, b = _mask(site, a), _mask(site, b)
    _require_spacelike(site, a, b)
    return _region(site, (site.past_mask(a) | site.past_mask(b)) & ~(a | b))


def region_decomposition(
    site: CausalSet, a: Iterable[Hashable], b: Iterable[Hashable]
) -> tuple[Region, Region, Region]:
    """Split the joint past into (mutual past, A-only past, B-only past)."""
    a, b = _mask(site, a), _mask(site, b)
    _require_spacelike(site, a, b)
    pa, pb = site.past_mask(a), site.past_mask(b)
    return (
        _region(site, pa & pb),
        _region(site, pa & ~(pb | a)),
        _region(site, pb & ~(pa | b)),
    )


def minimal_points(site: CausalSet) -> Region:
    """Points with nothing strictly below them (the initial hypersurface)."""
    return _region(site, sum(1 << i for i in range(site.n) if site.down[i] == 1 << i))
