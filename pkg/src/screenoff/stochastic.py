"""Stochastic causal models and screening-off checks.

A model attaches to each point ``p`` of a causal set a partition of a finite
sample space (the outcomes that can be told apart at ``p``).  The events
decidable in a region are the unions of atoms of the algebra generated by the
partitions of its points, and a full specification of a region is one such
atom.  All probabilities are exact :class:`fractions.Fraction` values.

Internally events are bitmasks over outcome indices.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Hashable, Iterable, Mapping, Sequence

from .causal_order import CausalSet, iter_bits


class ModelError(ValueError):
    def __init__(self, errors: Sequence[str]):
        super().__init__("; ".join(errors))
        self.errors = list(errors)


class ZeroConditioningEvent(ZeroDivisionError):
    """Conditioning event has probability zero."""


class PartitionError(ValueError):
    """The parts given for a factorization do not partition the region."""


class FactorizationFailure(RuntimeError):
    """A full specification could not be written as an intersection of part specifications."""


@dataclass(frozen=True, eq=False)
class StochasticCausalModel:
    site: CausalSet
    outcomes: tuple
    weights: tuple  # Fraction per outcome, aligned with ``outcomes``
    partitions: tuple  # per site point: tuple of frozensets of outcome labels

    @classmethod
    def create(
        cls,
        site: CausalSet,
        outcomes: Sequence[Hashable],
        measure: Mapping[Hashable, object],
        partitions: Mapping[Hashable, Iterable[Iterable[Hashable]]] | None = None,
    ) -> "StochasticCausalModel":
        """Build a model; points missing from ``partitions`` get the trivial partition."""
        outcomes = tuple(outcomes)
        partitions = partitions or {}
        unknown = [p for p in partitions if p not in site._index]
        if unknown:
            raise ModelError([f"partition given for unknown point {p!r}" for p in unknown])
        parts = tuple(
            tuple(frozenset(block) for block in partitions[p]) if p in partitions
            else (frozenset(outcomes),)
            for p in site.points
        )
        weights = tuple(Fraction(measure.get(w, 0)) for w in outcomes)
        extra = set(measure) - set(outcomes)
        if extra:
            raise ModelError([f"measure given for unknown outcome {w!r}" for w in sorted(map(str, extra))])
        return cls(site, outcomes, weights, parts)

    @property
    def measure(self) -> dict:
        return dict(zip(self.outcomes, self.weights))

    @cached_property
    def omega(self) -> int:
        return (1 << len(self.outcomes)) - 1

    @cached_property
    def _outcome_index(self) -> dict:
        return {w: i for i, w in enumerate(self.outcomes)}

    @cached_property
    def block_masks(self) -> tuple:
        """Per point, the blocks of its partition as outcome bitmasks."""
        return tuple(tuple(self.event_mask(b) for b in blocks) for blocks in self.partitions)

    @cached_property
    def _atom_cache(self) -> dict:
        return {}

    def event_mask(self, event: Iterable[Hashable]) -> int:
        idx = self._outcome_index
        mask = 0
        for w in event:
            mask |= 1 << idx[w]
        return mask

    def event_of(self, mask: int) -> frozenset:
        return frozenset(self.outcomes[i] for i in iter_bits(mask))

    def mu(self, mask: int) -> Fraction:
        w = self.weights
        return sum((w[i] for i in iter_bits(mask)), Fraction(0))

    def atoms(self, region_mask: int) -> tuple:
        """Outcome masks of the full specifications of a region (site-point mask)."""
        cache = self._atom_cache
        if region_mask not in cache:
            atoms = [self.omega]
            for i in iter_bits(region_mask):
                atoms = [a & b for a in atoms for b in self.block_masks[i] if a & b]
            cache[region_mask] = tuple(atoms)
        return cache[region_mask]

    def region_mask(self, region: Iterable[Hashable]) -> int:
        return self.site.mask_of(region)


def validate_model(m: StochasticCausalModel) -> list[str]:
    """Every violated model invariant, as readable messages (empty when valid)."""
    errors = []
    if len(set(m.outcomes)) != len(m.outcomes):
        errors.append("outcome labels are not distinct")
    if not m.outcomes:
        errors.append("sample space is empty")
    for w, x in zip(m.outcomes, m.weights):
        if x < 0:
            errors.append(f"outcome {w!r} has negative weight {x}")
    total = sum(m.weights, Fraction(0))
    if total != 1:
        errors.append(f"measure sums to {total}, not 1")
    everything = frozenset(m.outcomes)
    for p, blocks in zip(m.site.points, m.partitions):
        seen: set = set()
        for block in blocks:
            if not block:
                errors.append(f"partition at {p!r} has an empty block")
            stray = block - everything
            if stray:
                errors.append(f"partition at {p!r} uses unknown outcomes {sorted(map(str, stray))}")
            if seen & block:
                errors.append(f"partition at {p!r} has overlapping blocks {sorted(map(str, seen & block))}")
            seen |= block
        if everything - seen:
            errors.append(f"partition at {p!r} does not cover {sorted(map(str, everything - seen))}")
    return errors


def check_model(m: StochasticCausalModel) -> StochasticCausalModel:
    errors = validate_model(m)
    if errors:
        raise ModelError(errors)
    return m


def decidable_in(m: StochasticCausalModel, event: Iterable[Hashable], region: Iterable[Hashable]) -> bool:
    """Whether ``event`` is a union of full specifications of ``region``."""
    e = m.event_mask(event)
    return all(a & e in (0, a) for a in m.atoms(m.region_mask(region)))


@dataclass(frozen=True)
class FullSpecification:
    region: frozenset
    event: frozenset


def full_specifications(m: StochasticCausalModel, region: Iterable[Hashable]) -> list[FullSpecification]:
    region = frozenset(region)
    return [
        FullSpecification(region, m.event_of(a)) for a in m.atoms(m.region_mask(region))
    ]


def _cond(m, e: int, f: int) -> Fraction:
    mf = m.mu(f)
    if mf == 0:
        raise ZeroConditioningEvent("conditioning event has probability zero")
    return m.mu(e & f) / mf


def cond_prob(m: StochasticCausalModel, event, given) -> Fraction:
    return _cond(m, m.event_mask(event), m.event_mask(given))


def correlation(m: StochasticCausalModel, a, b, given=None) -> Fraction:
    """P(A and B | F) - P(A | F) P(B | F); ``given=None`` conditions on nothing."""
    f = m.omega if given is None else m.event_mask(given)
    ea, eb = m.event_mask(a), m.event_mask(b)
    return _cond(m, ea & eb, f) - _cond(m, ea, f) * _cond(m, eb, f)


def screens_off(m: StochasticCausalModel, a, b, region) -> bool:
    """Are A and B uncorrelated given every positive-measure full specification of ``region``?"""
    ea, eb = m.event_mask(a), m.event_mask(b)
    for f in m.atoms(m.region_mask(region)):
        mf = m.mu(f)
        if mf and m.mu(ea & eb & f) * mf != m.mu(ea & f) * m.mu(eb & f):
            return False
    return True


# screening-off conditions


@dataclass(frozen=True)
class Variant:
    name: str
    past: str  # "mutual" or "joint"
    eligibility: str  # "all", "rsp_finite" or "so2w"


VARIANTS = {
    "so1": Variant("so1", "mutual", "all"),
    "so2": Variant("so2", "joint", "all"),
    "finite-so1": Variant("finite-so1", "mutual", "rsp_finite"),
    "finite-so2": Variant("finite-so2", "joint", "rsp_finite"),
    "so2w": Variant("so2w", "joint", "so2w"),
}


def past_mask(site: CausalSet, past: str, a: int, b: int) -> int:
    pa, pb = site.past_mask(a), site.past_mask(b)
    if past == "mutual":
        return pa & pb
    if past == "joint":
        return (pa | pb) & ~(a | b)
    raise ValueError(f"unknown past region kind {past!r}")


def eligible(site: CausalSet, eligibility: str, mask: int) -> bool:
    if eligibility == "all":
        return True
    if eligibility == "rsp_finite":
        closure = site.closure_mask(mask)
        return site.past_mask(closure) & ~closure != 0
    if eligibility == "so2w":
        minimal = sum(1 << i for i in range(site.n) if site.down[i] == 1 << i)
        return not mask & minimal
    raise ValueError(f"unknown eligibility {eligibility!r}")


def spacelike_pairs(site: CausalSet, eligibility: str = "all", ordered: bool = True):
    """Pairs of nonempty, disjoint, spacelike, eligible region masks in a fixed order."""
    regions = [r for r in range(1, site.full_mask + 1) if eligible(site, eligibility, r)]
    for a in regions:
        reach = site.past_mask(a) | site.future_mask(a)
        for b in regions:
            if (ordered or a < b) and not reach & b:
                yield a, b


@dataclass(frozen=True)
class Violation:
    region_a: tuple
    region_b: tuple
    event_a: tuple
    event_b: tuple
    spec_region: tuple
    full_spec: tuple
    p_joint: Fraction
    p_product: Fraction

    def to_dict(self) -> dict:
        return {
            "region_a": list(self.region_a),
            "region_b": list(self.region_b),
            "event_a": list(self.event_a),
            "event_b": list(self.event_b),
            "spec_region": list(self.spec_region),
            "full_spec": list(self.full_spec),
            "p_joint": fraction_str(self.p_joint),
            "p_product": fraction_str(self.p_product),
        }


@dataclass
class CheckReport:
    condition: str
    holds: bool
    violations: list = field(default_factory=list)
    pairs_examined: int = 0
    specs_examined: int = 0

    def to_dict(self, max_violations: int | None = None) -> dict:
        shown = self.violations if max_violations is None else self.violations[:max_violations]
        return {
            "condition": self.condition,
            "holds": self.holds,
            "pairs_examined": self.pairs_examined,
            "specs_examined": self.specs_examined,
            "violation_count": len(self.violations),
            "violations": [v.to_dict() for v in shown],
        }


def fraction_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _events(atoms: tuple, mode: str) -> list[int]:
    if mode == "atoms":
        return list(atoms)
    # every nonempty union of atoms; the empty event and Omega are trivially screened
    out = []
    for k in range(1, len(atoms) + 1):
        for combo in combinations(atoms, k):
            e = 0
            for a in combo:
                e |= a
            out.append(e)
    return out


def pair_violations(m: StochasticCausalModel, a: int, b: int, past: int, mode: str = "atoms"):
    """Violations of screening off for regions ``a``, ``b`` given full specs of ``past``."""
    site = m.site
    labels = lambda mask: tuple(sorted(site.labels_of(mask), key=site.index))
    outcomes = lambda mask: tuple(m.outcomes[i] for i in iter_bits(mask))
    events_a = _events(m.atoms(a), mode)
    events_b = _events(m.atoms(b), mode)
    found = []
    specs = 0
    for f in m.atoms(past):
        mf = m.mu(f)
        if mf == 0:
            continue
        specs += 1
        mb = [m.mu(eb & f) for eb in events_b]
        for ea in events_a:
            ma = m.mu(ea & f)
            for eb, mbf in zip(events_b, mb):
                joint = m.mu(ea & eb & f)
                if joint * mf != ma * mbf:
                    found.append(Violation(
                        labels(a), labels(b), outcomes(ea), outcomes(eb),
                        labels(past), outcomes(f), joint / mf, (ma / mf) * (mbf / mf),
                    ))
    return found, specs


def check_condition(
    m: StochasticCausalModel,
    variant: str | Variant = "so1",
    mode: str = "atoms",
) -> CheckReport:
    """Check a screening-off condition over every eligible spacelike pair.

    ``mode="atoms"`` tests only full specifications of each region (enough,
    since correlation is additive in each event); ``mode="full"`` tests every
    event of the generated algebras.
    """
    v = VARIANTS[variant] if isinstance(variant, str) else variant
    report = CheckReport(v.name, True)
    for a, b in spacelike_pairs(m.site, v.eligibility):
        found, specs = pair_violations(m, a, b, past_mask(m.site, v.past, a, b), mode)
        report.pairs_examined += 1
        report.specs_examined += specs
        report.violations.extend(found)
    report.holds = not report.violations
    return report


def factor_masks(m: StochasticCausalModel, f: int, parts: Sequence[int]) -> list[int]:
    """Mask-level factorization: one atom per part, meeting exactly in ``f``."""
    out = []
    meet = m.omega
    for part in parts:
        factor = next((a for a in m.atoms(part) if f & ~a == 0), None)
        if factor is None:
            raise FactorizationFailure(
                f"no full specification of {sorted(map(str, m.site.labels_of(part)))} "
                f"contains {sorted(map(str, m.event_of(f)))}"
            )
        out.append(factor)
        meet &= factor
    if meet != f:
        raise FactorizationFailure(
            f"factors intersect to {sorted(map(str, m.event_of(meet)))}, "
            f"not {sorted(map(str, m.event_of(f)))}"
        )
    return out


def factor_full_specification(
    m: StochasticCausalModel, spec: FullSpecification, parts: Sequence[Iterable[Hashable]]
) -> list[FullSpecification]:
    """Write ``spec`` as the intersection of one full specification per part.

    Raises :class:`PartitionError` if ``parts`` is not a partition of the
    specified region and :class:`FactorizationFailure` if no such
    intersection exists.
    """
    parts = [frozenset(p) for p in parts]
    union: frozenset = frozenset()
    for p in parts:
        if union & p:
            raise PartitionError(f"parts overlap on {sorted(map(str, union & p))}")
        union |= p
    if union != spec.region:
        raise PartitionError("parts do not cover the specified region exactly")
    factors = factor_masks(m, m.event_mask(spec.event), [m.region_mask(p) for p in parts])
    return [FullSpecification(p, m.event_of(a)) for p, a in zip(parts, factors)]
