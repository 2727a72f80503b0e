from itertools import chain, combinations

import pytest
from hypothesis import given, settings

from screenoff.causal_order import (
    CausalSet,
    CycleError,
    NotSpacelike,
    are_spacelike,
    build_causal_set,
    causal_closure,
    causal_future,
    causal_past,
    is_causally_infinite_rsp,
    joint_past,
    minimal_points,
    mutual_past,
    region_decomposition,
    spacelike_complement,
)
from screenoff.search import enumerate_posets

from conftest import posets_with_regions


def subsets(items):
    items = list(items)
    return chain.from_iterable(combinations(items, r) for r in range(len(items) + 1))


def test_build_single_point():
    site = build_causal_set(["a"], [])
    assert site.relation == {("a", "a")}


def test_build_v_poset(v_poset):
    assert len(v_poset.relation) == 5
    assert ("a", "c") in v_poset.relation and ("b", "c") in v_poset.relation


def test_build_closes_transitively():
    site = build_causal_set("abc", [("a", "b"), ("b", "c")])
    assert site.precedes("a", "c")


def test_build_rejects_cycle():
    with pytest.raises(CycleError):
        build_causal_set("ab", [("a", "b"), ("b", "a")])


def test_build_rejects_duplicate_labels():
    with pytest.raises(ValueError):
        build_causal_set("aa", [])


def test_causal_past_examples(v_poset, diamond):
    assert causal_past(v_poset, {"c"}) == {"a", "b", "c"}
    assert causal_past(v_poset, set()) == set()
    assert causal_past(diamond, {"b"}) == {"a", "b"}


def test_causal_future_examples(v_poset, diamond):
    assert causal_future(v_poset, {"a"}) == {"a", "c"}
    assert causal_future(v_poset, set()) == set()
    assert causal_future(diamond, {"a"}) == {"a", "b", "c", "d"}


def test_spacelike_complement_examples(v_poset):
    antichain = build_causal_set("ab", [])
    chain_ = build_causal_set("ab", [("a", "b")])
    assert spacelike_complement(antichain, {"a"}) == {"b"}
    assert spacelike_complement(chain_, {"a"}) == set()
    assert spacelike_complement(v_poset, {"a"}) == {"b"}


def test_causal_closure_examples(v_poset):
    antichain = build_causal_set("ab", [])
    chain_ = build_causal_set("ab", [("a", "b")])
    assert causal_closure(antichain, {"a"}) == {"a"}
    assert causal_closure(chain_, {"a"}) == {"a", "b"}
    # {a}' = {b} and {b}' = {a}: c lies above b, so it is not spacelike to it
    assert causal_closure(v_poset, {"a"}) == {"a"}


def test_rsp_examples(v_poset):
    chain_ = build_causal_set("ab", [("a", "b")])
    assert is_causally_infinite_rsp(v_poset, v_poset.points)
    assert is_causally_infinite_rsp(chain_, {"b"})
    # closure {a} contains its own past {a}
    assert is_causally_infinite_rsp(v_poset, {"a"})
    # here {a}'' = {a} but its past also holds x
    common = build_causal_set("xab", [("x", "a"), ("x", "b")])
    assert causal_closure(common, {"a"}) == {"a"}
    assert not is_causally_infinite_rsp(common, {"a"})


def test_are_spacelike_examples(v_poset):
    chain_ = build_causal_set("ab", [("a", "b")])
    assert are_spacelike(v_poset, {"a"}, {"b"})
    assert not are_spacelike(chain_, {"a"}, {"b"})
    assert are_spacelike(v_poset, set(), {"c"})


def test_mutual_and_joint_past(four_point):
    common = build_causal_set("xab", [("x", "a"), ("x", "b")])
    antichain = build_causal_set("ab", [])
    assert mutual_past(common, {"a"}, {"b"}) == {"x"}
    assert mutual_past(antichain, {"a"}, {"b"}) == set()
    assert mutual_past(four_point, {"a"}, {"b"}) == {"x"}
    assert joint_past(common, {"a"}, {"b"}) == {"x"}
    assert joint_past(antichain, {"a"}, {"b"}) == set()
    assert joint_past(four_point, {"a"}, {"b"}) == {"x", "p"}


def test_pasts_require_spacelike():
    chain_ = build_causal_set("ab", [("a", "b")])
    for fn in (mutual_past, joint_past, region_decomposition):
        with pytest.raises(NotSpacelike):
            fn(chain_, {"a"}, {"b"})


def test_region_decomposition_examples(four_point):
    common = build_causal_set("xab", [("x", "a"), ("x", "b")])
    antichain = build_causal_set("ab", [])
    assert region_decomposition(common, {"a"}, {"b"}) == ({"x"}, set(), set())
    assert region_decomposition(four_point, {"a"}, {"b"}) == ({"x"}, {"p"}, set())
    assert region_decomposition(antichain, {"a"}, {"b"}) == (set(), set(), set())


def test_minimal_points(diamond):
    assert minimal_points(build_causal_set("ab", [("a", "b")])) == {"a"}
    assert minimal_points(build_causal_set("ab", [])) == {"a", "b"}
    assert minimal_points(diamond) == {"a"}


def test_round_trip_dict(diamond):
    assert CausalSet.from_dict(diamond.to_dict()) == diamond


def test_region_rejects_foreign_points(v_poset):
    with pytest.raises(ValueError):
        v_poset.region({"z"})


@settings(max_examples=300, deadline=None)
@given(posets_with_regions())
def test_closure_laws(data):
    site, (r, s) = data
    comp = spacelike_complement
    assert r <= causal_past(site, r) and r <= causal_future(site, r)
    closure = causal_closure(site, r)
    assert r <= closure
    assert causal_closure(site, closure) == closure
    assert comp(site, comp(site, comp(site, r))) == comp(site, r)
    assert causal_past(site, r | s) == causal_past(site, r) | causal_past(site, s)
    if r <= s:
        assert comp(site, s) <= comp(site, r)
        assert causal_past(site, r) <= causal_past(site, s)


@settings(max_examples=300, deadline=None)
@given(posets_with_regions())
def test_past_regions_for_spacelike_pairs(data):
    site, (a, b) = data
    a = a - b
    if not are_spacelike(site, a, b):
        return
    p1, p2 = mutual_past(site, a, b), joint_past(site, a, b)
    assert p1 <= p2
    assert not p1 & (a | b) and not p2 & (a | b)
    x_only, y_only = region_decomposition(site, a, b)[1:]
    assert not (p1 & x_only or p1 & y_only or x_only & y_only)
    assert p1 | x_only | y_only == p2


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_complement_matches_pointwise_definition(n):
    for site in enumerate_posets(n):
        for r in subsets(site.points):
            direct = {
                p for p in site.points
                if all(not site.precedes(p, q) and not site.precedes(q, p) for q in r)
            }
            assert spacelike_complement(site, r) == direct
