from itertools import combinations, permutations, product

import networkx as nx
import numpy as np
import pytest

from screenoff.causal_order import build_causal_set
from screenoff.search import (
    CapExceeded,
    Exhaustive,
    NotFound,
    Random,
    SweepConfig,
    compositions,
    enumerate_models,
    enumerate_posets,
    equivalence_sweep,
    find_simpson,
    region_partitions,
    verify_corollary1_sweep,
)
from screenoff.stochastic import StochasticCausalModel, validate_model
from fractions import Fraction

A001035 = [1, 3, 19, 219]
A000112 = [1, 2, 5, 16]


def brute_force_posets(n):
    """Every strict order on range(n) by filtering all relation subsets."""
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    out = []
    for bits in product([0, 1], repeat=len(pairs)):
        rel = {p for p, b in zip(pairs, bits) if b}
        if any((j, i) in rel for i, j in rel):
            continue
        if any((i, k) not in rel for i, j in rel for j2, k in rel if j == j2 and i != k):
            continue
        out.append(frozenset(rel))
    return out


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_labelled_poset_counts(n):
    brute = brute_force_posets(n)
    ours = [frozenset((s.index(p), s.index(q)) for p, q in s.relation if p != q) for s in enumerate_posets(n)]
    assert len(ours) == len(set(ours)) == len(brute) == A001035[n - 1]
    assert set(ours) == set(brute)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_unlabelled_poset_counts(n):
    classes = []
    for rel in brute_force_posets(n):
        g = nx.DiGraph()
        g.add_nodes_from(range(n))
        g.add_edges_from(rel)
        if not any(nx.is_isomorphic(g, h) for h in classes):
            classes.append(g)
    reps = list(enumerate_posets(n, up_to_iso=True))
    assert len(reps) == len(classes) == A000112[n - 1]


def test_compositions():
    assert list(compositions(2, 2)) == [(0, 2), (1, 1), (2, 0)]
    assert len(list(compositions(1, 4))) == 4
    assert all(sum(c) == 4 for c in compositions(4, 5))


def test_enumerate_models_examples():
    one = build_causal_set("a")
    models = list(enumerate_models(one, 2, Exhaustive(2)))
    assert sorted(tuple(m.weights) for m in models) == [
        (0, 1), (Fraction(1, 2), Fraction(1, 2)), (1, 0)
    ]
    anti = build_causal_set("ab")
    point_masses = list(enumerate_models(anti, 2, Exhaustive(1)))
    assert len(point_masses) == 4
    assert all(validate_model(m) == [] for m in point_masses)


def test_random_models_are_deterministic():
    site = build_causal_set("abc", [("a", "b")])
    first = [m.weights for m in enumerate_models(site, 2, Random(5, 30))]
    second = [m.weights for m in enumerate_models(site, 2, Random(5, 30))]
    assert first == second
    assert all(sum(w) == 1 for w in first)


def test_exhaustive_cap():
    site = next(enumerate_posets(4))
    with pytest.raises(CapExceeded):
        list(enumerate_models(site, 3, Exhaustive(2)))


def test_config_caps(monkeypatch):
    with pytest.raises(CapExceeded):
        SweepConfig(max_points=9).validate()
    with pytest.raises(CapExceeded):
        SweepConfig(max_points=3, denominator=9).validate()
    monkeypatch.setenv("SCREENOFF_MAX_POINTS", "5")
    SweepConfig(max_points=5, denominator=None, samples=1).validate()


def test_equivalence_sweep_small():
    r = equivalence_sweep(SweepConfig(max_points=3, denominator=2))
    # posets x compositions of 2 into 2**n parts, n = 1, 2, 3
    assert r.models_examined == 1 * 3 + 3 * 10 + 19 * 36
    assert r.discrepancies == []
    assert r.verdicts["so1"] == r.verdicts["so2"]


def test_equivalence_sweep_empty_variants():
    r = equivalence_sweep(SweepConfig(max_points=2, denominator=1, variants=()))
    assert r.verdicts == {} and r.discrepancies == []
    assert r.models_examined > 0


def test_region_partitions():
    assert list(region_partitions(0)) == [(0,)]
    assert list(region_partitions(0b1)) == [(1,)]
    splits = list(region_partitions(0b111))
    assert splits[0] == (0b111,)
    assert len(splits) == 1 + 3
    assert all(a | b == 0b111 and not a & b for a, b in splits[1:])


def test_corollary1_single_points():
    r = verify_corollary1_sweep(SweepConfig(max_points=1, denominator=2))
    assert r.failure_count == 0 and r.models == 3


def test_corollary1_small_and_fault():
    config = SweepConfig(max_points=3, denominator=2)
    assert verify_corollary1_sweep(config).failure_count == 0
    faulty = verify_corollary1_sweep(config, inject_fault=True)
    assert faulty.failure_count == 1
    assert faulty.specs == verify_corollary1_sweep(config).specs
    assert faulty.failures[0]["model_id"] == "exhaustive/n=1/poset=0/measure=0"


def test_find_simpson_default():
    w = find_simpson()
    m = w.model
    assert w.unconditional == 0 and w.conditional != 0
    assert m.site.spacelike_masks(m.site.mask_of(w.region_a), m.site.mask_of(w.region_b))


def product_measures(site, k=2):
    """Product measures only: each point independent with its own marginal."""
    from screenoff.search import product_space

    labels, partitions = product_space(site, k)
    for margs in product([Fraction(1, 3), Fraction(1, 2), Fraction(3, 4)], repeat=site.n):
        measure = {}
        for lab in labels:
            p = Fraction(1)
            for bit, q in zip(lab, margs):
                p *= q if bit == "1" else 1 - q
            measure[lab] = p
        yield StochasticCausalModel.create(site, labels, measure, partitions)


def test_find_simpson_not_found_on_products():
    stream = (m for n in (2, 3) for site in enumerate_posets(n) for m in product_measures(site))
    with pytest.raises(NotFound):
        find_simpson(models=stream)


def test_find_simpson_zero_budget():
    with pytest.raises(NotFound):
        find_simpson(budget=0)


def test_sweep_report_is_deterministic_across_workers():
    config = SweepConfig(max_points=3, denominator=2, samples=200, seed=9, random_points=4,
                         variants=("so1", "so2", "so2w"))
    a = equivalence_sweep(config).to_json()
    b = equivalence_sweep(config).to_json()
    c = equivalence_sweep(config, workers=2).to_json()
    assert a == b == c
