"""Instance generation and verification sweeps.

* :func:`enumerate_posets` lists every partial order on ``n`` labelled points
  (or one per isomorphism class).
* :func:`enumerate_models` puts product sample spaces and measures on a site.
* :func:`equivalence_sweep` compares the screening-off variants on every
  generated model, :func:`verify_corollary1_sweep` checks that full
  specifications factor over region partitions, and :func:`find_simpson`
  looks for a model where conditioning on the past creates a correlation.

Sweeps are deterministic for a fixed config.  With ``workers > 1`` the work
is split by poset and merged back in index order, so the output does not
depend on the worker count.
"""
from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import combinations, permutations, product

import numpy as np

from .accel import build_plan, variant_verdicts
from .causal_order import CausalSet, build_causal_set, iter_bits
from .modelfile import model_to_dict
from .stochastic import (
    VARIANTS,
    FactorizationFailure,
    StochasticCausalModel,
    factor_masks,
    fraction_str,
    spacelike_pairs,
)


class CapExceeded(ValueError):
    pass


class NotFound(LookupError):
    pass


def _cap(name: str, default: int) -> int:
    return int(os.environ.get(name, default))


def caps() -> dict:
    """Size limits; override with SCREENOFF_MAX_POINTS / _MAX_DENOMINATOR / _MAX_OMEGA."""
    return {
        "max_points": _cap("SCREENOFF_MAX_POINTS", 4),
        "max_denominator": _cap("SCREENOFF_MAX_DENOMINATOR", 4),
        "max_omega": _cap("SCREENOFF_MAX_OMEGA", 16),
    }


# posets


def point_labels(n: int) -> tuple:
    return tuple("abcdefghijklmnopqrstuvwxyz"[:n]) if n <= 26 else tuple(f"p{i}" for i in range(n))


def _extend(rows: list[int], k: int):
    """All ways to add point ``k`` to a poset given by strict down-set rows."""
    full = (1 << k) - 1
    up = [0] * k
    for j in range(k):
        for i in iter_bits(rows[j]):
            up[i] |= 1 << j
    below = [m for m in range(full + 1) if all(rows[i] & ~m == 0 for i in iter_bits(m))]
    above = [m for m in range(full + 1) if all(up[i] & ~m == 0 for i in iter_bits(m))]
    for d in below:
        for u in above:
            if d & u:
                continue
            # transitivity through the new point: every d must already be below every u
            if all(rows[j] & d == d for j in iter_bits(u)):
                new = list(rows)
                for j in iter_bits(u):
                    new[j] |= 1 << k
                yield new + [d]


def _strict_rows(n: int):
    if n == 0:
        yield []
        return
    for rows in _strict_rows(n - 1):
        yield from _extend(rows, n - 1)


def _canonical(rows: list[int]) -> tuple:
    n = len(rows)
    best = None
    for perm in permutations(range(n)):
        pos = [0] * n
        for new, old in enumerate(perm):
            pos[old] = new
        key = tuple(
            sorted((pos[i], pos[j]) for j in range(n) for i in iter_bits(rows[j]))
        )
        if best is None or key < best:
            best = key
    return best


def _site(rows: list[int], labels) -> CausalSet:
    return build_causal_set(labels, [(labels[i], labels[j]) for j in range(len(rows)) for i in iter_bits(rows[j])])


def enumerate_posets(n: int, up_to_iso: bool = False, labels=None):
    """Yield every partial order on ``n`` labelled points exactly once."""
    if n < 1:
        raise ValueError("need at least one point")
    labels = tuple(labels) if labels is not None else point_labels(n)
    seen = set()
    for rows in _strict_rows(n):
        if up_to_iso:
            key = _canonical(rows)
            if key in seen:
                continue
            seen.add(key)
        yield _site(rows, labels)


# models


def product_space(site: CausalSet, k: int):
    """Outcome labels and coordinate partitions for ``k`` outcomes per point."""
    digits = "0123456789abcdefghijklmnopqrstuvwxyz"
    if k > len(digits):
        raise ValueError("at most 36 outcomes per point")
    combos = list(product(range(k), repeat=site.n))
    labels = tuple("".join(digits[x] for x in c) for c in combos)
    partitions = {
        p: [[lab for lab, c in zip(labels, combos) if c[i] == x] for x in range(k)]
        for i, p in enumerate(site.points)
    }
    return labels, partitions


def compositions(total: int, parts: int):
    """All tuples of ``parts`` nonnegative integers summing to ``total``."""
    for cuts in combinations(range(total + parts - 1), parts - 1):
        prev = -1
        out = []
        for c in cuts:
            out.append(c - prev - 1)
            prev = c
        out.append(total + parts - 2 - prev)
        yield tuple(out)


def model_from_weights(site: CausalSet, k: int, weights) -> StochasticCausalModel:
    labels, partitions = product_space(site, k)
    total = int(sum(int(w) for w in weights))
    measure = {lab: Fraction(int(w), total) for lab, w in zip(labels, weights)}
    return StochasticCausalModel.create(site, labels, measure, partitions)


@dataclass(frozen=True)
class Exhaustive:
    denominator: int


@dataclass(frozen=True)
class Random:
    seed: int
    samples: int


def enumerate_models(site: CausalSet, k: int, measure_mode, cap: int | None = None):
    """Models on ``site`` with ``k`` outcomes per point.

    ``Exhaustive(D)`` yields every measure whose values are multiples of
    ``1/D``; ``Random(seed, samples)`` draws seeded measures from a mix of
    families (see :func:`random_weights`).
    """
    n_out = k ** site.n
    cap = caps()["max_omega"] if cap is None else cap
    if isinstance(measure_mode, Exhaustive):
        if n_out > cap:
            raise CapExceeded(f"|Omega| = {n_out} exceeds the cap of {cap}")
        for w in compositions(measure_mode.denominator, n_out):
            yield model_from_weights(site, k, w)
    else:
        rng = np.random.default_rng(measure_mode.seed)
        for _ in range(measure_mode.samples):
            _, w = random_weights(rng, site, k)
            yield model_from_weights(site, k, w)


def _topological(site: CausalSet) -> list[int]:
    return sorted(range(site.n), key=lambda i: bin(site.down[i]).count("1"))


def _random_distribution(rng, k: int, d: int) -> np.ndarray:
    """Random numerators of a distribution over ``k`` values with denominator ``d``."""
    cuts = np.sort(rng.integers(0, d + 1, size=k - 1))
    return np.diff(np.concatenate(([0], cuts, [d])))


def _local_weights(rng, site: CausalSet, k: int) -> np.ndarray:
    """Each point's outcome drawn from a table indexed by the outcomes in its past."""
    combos = np.array(list(product(range(k), repeat=site.n)), dtype=np.int64).reshape(-1, site.n)
    weights = np.ones(len(combos), dtype=np.int64)
    for i in _topological(site):
        parents = [j for j in iter_bits(site.down[i]) if j != i]
        # one denominator per point keeps the tables on a common scale
        d = int(rng.integers(1, 5))
        tables = {cfg: _random_distribution(rng, k, d) for cfg in product(range(k), repeat=len(parents))}
        for row, c in enumerate(combos):
            weights[row] *= tables[tuple(c[parents])][c[i]]
    return weights


FAMILIES = ("generic", "local", "perturbed", "mixture", "sparse")


def random_weights(rng, site: CausalSet, k: int) -> tuple[str, np.ndarray]:
    """One random integer measure (unnormalised) and the name of its family.

    ``local`` measures come from past-driven mechanisms and satisfy screening
    off; ``perturbed`` and ``mixture`` are near misses; ``generic`` and
    ``sparse`` are unstructured.
    """
    n_out = k ** site.n
    family = FAMILIES[int(rng.integers(len(FAMILIES)))]
    if family == "generic":
        w = rng.integers(0, 7, size=n_out)
        w[rng.random(n_out) < 0.3] = 0
    elif family == "local":
        w = _local_weights(rng, site, k)
    elif family == "perturbed":
        w = 2 * _local_weights(rng, site, k)
        w[rng.integers(n_out, size=int(rng.integers(1, 3)))] += 1
    elif family == "mixture":
        w = _local_weights(rng, site, k) + _local_weights(rng, site, k)
    else:
        w = np.zeros(n_out, dtype=np.int64)
        w[rng.integers(n_out, size=int(rng.integers(1, 5)))] = rng.integers(1, 4)
    w = np.asarray(w, dtype=np.int64)
    if w.sum() == 0:
        w[int(rng.integers(n_out))] = 1
    return family, w


# sweeps


@dataclass(frozen=True)
class SweepConfig:
    max_points: int = 3
    outcomes_per_point: int = 2
    denominator: int | None = 2
    seed: int = 0
    samples: int = 0
    random_points: int | None = None
    variants: tuple = ("so1", "so2")

    def validate(self) -> "SweepConfig":
        c = caps()
        if not 1 <= self.max_points <= c["max_points"]:
            raise CapExceeded(f"max_points={self.max_points} outside 1..{c['max_points']}")
        rp = self.random_points if self.random_points is not None else self.max_points
        if self.samples and not 1 <= rp <= c["max_points"]:
            raise CapExceeded(f"random_points={rp} outside 1..{c['max_points']}")
        if self.outcomes_per_point < 2:
            raise ValueError("need at least two outcomes per point")
        if self.denominator is not None:
            if not 1 <= self.denominator <= c["max_denominator"]:
                raise CapExceeded(f"denominator={self.denominator} outside 1..{c['max_denominator']}")
            omega = self.outcomes_per_point ** self.max_points
            if omega > c["max_omega"]:
                raise CapExceeded(f"exhaustive |Omega| = {omega} exceeds the cap of {c['max_omega']}")
        unknown = [v for v in self.variants if v not in VARIANTS]
        if unknown:
            raise ValueError(f"unknown variants {unknown}")
        if self.samples < 0:
            raise ValueError("samples must be nonnegative")
        return self


@dataclass
class Batch:
    """All models of one sweep that share a site."""

    key: str
    site: CausalSet
    weights: np.ndarray
    labels: list  # per row: model id within the sweep


def _batches(config: SweepConfig) -> list[Batch]:
    k = config.outcomes_per_point
    out = []
    if config.denominator is not None:
        for n in range(1, config.max_points + 1):
            for pi, site in enumerate(enumerate_posets(n)):
                w = np.array(list(compositions(config.denominator, k ** n)), dtype=np.int64)
                ids = [f"exhaustive/n={n}/poset={pi}/measure={j}" for j in range(len(w))]
                out.append(Batch(f"exhaustive/n={n}/poset={pi}", site, w, ids))
    if config.samples:
        n = config.random_points if config.random_points is not None else config.max_points
        sites = list(enumerate_posets(n))
        rng = np.random.default_rng(config.seed)
        rows: dict = {}
        for s in range(config.samples):
            pi = int(rng.integers(len(sites)))
            family, w = random_weights(rng, sites[pi], k)
            rows.setdefault(pi, []).append((f"random/{s}/{family}/poset={pi}", w))
        for pi in sorted(rows):
            ids, ws = zip(*rows[pi])
            out.append(Batch(f"random/n={n}/poset={pi}", sites[pi], np.array(ws), list(ids)))
    return out


def _run_batch(args):
    batch, variants, k, backend = args
    if not variants:
        return {}
    template = model_from_weights(batch.site, k, np.ones(k ** batch.site.n, dtype=np.int64))
    plan = build_plan(template, variants)
    verdicts = variant_verdicts(plan, batch.weights, backend)
    return {name: v.tolist() for name, v in verdicts.items()}


def _map(fn, jobs, workers: int):
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, jobs))
    return [fn(j) for j in jobs]


COMPARISONS = (("finite-so1", "so1"), ("finite-so2", "so2"), ("so2w", "so2"))


@dataclass
class SweepReport:
    config: dict
    posets_examined: int = 0
    models_examined: int = 0
    verdicts: dict = field(default_factory=dict)
    discrepancies: list = field(default_factory=list)
    variant_differences: dict = field(default_factory=dict)
    wall_time: float = 0.0

    def to_dict(self, timing: bool = False) -> dict:
        out = {
            "config": self.config,
            "posets_examined": self.posets_examined,
            "models_examined": self.models_examined,
            "verdicts": self.verdicts,
            "discrepancy_count": len(self.discrepancies),
            "discrepancies": self.discrepancies,
            "variant_differences": self.variant_differences,
        }
        if timing:
            out["wall_time_seconds"] = round(self.wall_time, 3)
        return out

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.to_dict(timing), indent=2, sort_keys=True) + "\n"


def equivalence_sweep(config: SweepConfig, workers: int = 1, backend: str | None = None) -> SweepReport:
    """Evaluate every configured variant on every generated model.

    Models where SO1 and SO2 disagree are recorded in full as discrepancies.
    Disagreements between a restricted variant and its original are counted
    in ``variant_differences`` for information only.
    """
    start = time.perf_counter()
    config.validate()
    variants = tuple(config.variants)
    k = config.outcomes_per_point
    batches = _batches(config)
    results = _map(_run_batch, [(b, variants, k, backend) for b in batches], workers)

    report = SweepReport(config=asdict(config))
    report.config["variants"] = list(variants)
    report.posets_examined = len({b.key for b in batches})
    report.verdicts = {v: {"holds": 0, "fails": 0} for v in variants}
    diffs = {f"{a} vs {b}": {"count": 0, "examples": []} for a, b in COMPARISONS if a in variants and b in variants}
    for batch, verdicts in zip(batches, results):
        report.models_examined += len(batch.labels)
        for v in variants:
            holds = sum(verdicts[v])
            report.verdicts[v]["holds"] += holds
            report.verdicts[v]["fails"] += len(batch.labels) - holds
        for row, label in enumerate(batch.labels):
            if "so1" in verdicts and "so2" in verdicts and verdicts["so1"][row] != verdicts["so2"][row]:
                model = model_from_weights(batch.site, k, batch.weights[row])
                report.discrepancies.append({
                    "model_id": label,
                    "so1": verdicts["so1"][row],
                    "so2": verdicts["so2"][row],
                    "model": model_to_dict(model),
                })
            for a, b in COMPARISONS:
                if a in verdicts and b in verdicts and verdicts[a][row] != verdicts[b][row]:
                    d = diffs[f"{a} vs {b}"]
                    d["count"] += 1
                    if len(d["examples"]) < 3:
                        d["examples"].append(label)
    report.variant_differences = diffs
    report.wall_time = time.perf_counter() - start
    return report


# Corollary 1


def region_partitions(region: int):
    """The region itself as one part, then every split into two nonempty parts."""
    yield (region,)
    if region:
        low = region & -region
        rest = region ^ low
        sub = rest
        # each unordered split counted once: the part holding the lowest bit
        while True:
            first = low | sub
            if first != region:
                yield (first, region ^ first)
            if sub == 0:
                break
            sub = (sub - 1) & rest


@dataclass
class Corollary1Report:
    models: int = 0
    regions: int = 0
    partitions: int = 0
    specs: int = 0
    failure_count: int = 0
    failures: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def sweep_models(config: SweepConfig):
    """``(model_id, model)`` for every model a sweep with ``config`` examines."""
    for batch in _batches(config):
        for label, w in zip(batch.labels, batch.weights):
            yield label, model_from_weights(batch.site, config.outcomes_per_point, w)


def _corollary1_one(label: str, m: StochasticCausalModel, report: Corollary1Report, corrupt: bool) -> bool:
    """Returns True once a fault has been injected."""
    injected = False
    for region in range(m.site.full_mask + 1):
        report.regions += 1
        for parts in region_partitions(region):
            report.partitions += 1
            for f in m.atoms(region):
                report.specs += 1
                target = f
                if corrupt and not injected and f != m.omega:
                    # corrupt the atom by adding one outcome from outside it
                    low = m.omega & ~f
                    target = f | (low & -low)
                    injected = True
                try:
                    factor_masks(m, target, parts)
                except FactorizationFailure as exc:
                    report.failure_count += 1
                    if len(report.failures) < 10:
                        report.failures.append({
                            "model_id": label,
                            "region": sorted(m.site.labels_of(region)),
                            "parts": [sorted(m.site.labels_of(p)) for p in parts],
                            "spec": sorted(m.event_of(target)),
                            "error": str(exc),
                            "model": model_to_dict(m),
                        })
    return injected


def verify_corollary1_sweep(config: SweepConfig, inject_fault: bool = False) -> Corollary1Report:
    """Factor every full specification over every partition into at most two parts.

    With ``inject_fault`` exactly one specification in the sweep is corrupted
    first; the report must then show exactly one failure.
    """
    config.validate()
    report = Corollary1Report()
    pending = inject_fault
    for label, m in sweep_models(config):
        report.models += 1
        if _corollary1_one(label, m, report, pending):
            pending = False
    return report


# Simpson's paradox


@dataclass
class SimpsonWitness:
    model: StochasticCausalModel
    region_a: tuple
    region_b: tuple
    past_region: tuple
    event_a: frozenset
    event_b: frozenset
    spec: frozenset
    unconditional: Fraction
    conditional: Fraction
    models_searched: int

    def to_dict(self) -> dict:
        order = self.model.outcomes.index
        return {
            "model": model_to_dict(self.model),
            "region_a": list(self.region_a),
            "region_b": list(self.region_b),
            "past_region": list(self.past_region),
            "event_a": sorted(self.event_a, key=order),
            "event_b": sorted(self.event_b, key=order),
            "full_spec": sorted(self.spec, key=order),
            "correlation_unconditional": fraction_str(self.unconditional),
            "correlation_given_spec": fraction_str(self.conditional),
            "models_searched": self.models_searched,
        }


DEFAULT_SIMPSON_CONFIG = SweepConfig(max_points=3, outcomes_per_point=2, denominator=4)
DEFAULT_SIMPSON_BUDGET = 100_000


def simpson_in_model(m: StochasticCausalModel):
    """First (A, B, past, a, b, f) where a, b are uncorrelated but correlated given f."""
    site = m.site
    for a, b in spacelike_pairs(site, ordered=False):
        past = site.past_mask(a) & site.past_mask(b)
        if not past:
            continue
        for ea in m.atoms(a):
            pa = m.mu(ea)
            for eb in m.atoms(b):
                if m.mu(ea & eb) != pa * m.mu(eb):
                    continue
                for f in m.atoms(past):
                    mf = m.mu(f)
                    if mf and m.mu(ea & eb & f) * mf != m.mu(ea & f) * m.mu(eb & f):
                        return a, b, past, ea, eb, f
    return None


def find_simpson(config: SweepConfig | None = None, budget: int = DEFAULT_SIMPSON_BUDGET, models=None) -> SimpsonWitness:
    """Search models in a fixed order for a Simpson reversal over a mutual past.

    ``models`` overrides the stream generated from ``config``.  Raises
    :class:`NotFound` when ``budget`` models have been tried without success.
    """
    if models is None:
        models = (m for _, m in sweep_models((config or DEFAULT_SIMPSON_CONFIG).validate()))
    searched = 0
    for m in models:
        if searched >= budget:
            break
        searched += 1
        hit = simpson_in_model(m)
        if hit is None:
            continue
        a, b, past, ea, eb, f = hit
        labels = lambda mask: tuple(sorted(m.site.labels_of(mask), key=m.site.index))
        conditional = (m.mu(ea & eb & f) * m.mu(f) - m.mu(ea & f) * m.mu(eb & f)) / m.mu(f) ** 2
        return SimpsonWitness(
            m, labels(a), labels(b), labels(past), m.event_of(ea), m.event_of(eb), m.event_of(f),
            m.mu(ea & eb) - m.mu(ea) * m.mu(eb), conditional, searched,
        )
    raise NotFound(f"no Simpson instance among {searched} models")
