import random
from itertools import product

import pytest
from hypothesis import strategies as st

from screenoff.causal_order import build_causal_set


@pytest.fixture
def v_poset():
    return build_causal_set("abc", [("a", "c"), ("b", "c")])


@pytest.fixture
def diamond():
    return build_causal_set("abcd", [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")])


@pytest.fixture
def four_point():
    # x below a and b, p below a only
    return build_causal_set(["x", "p", "a", "b"], [("x", "a"), ("x", "b"), ("p", "a")])


def random_poset(rng: random.Random, n: int):
    """Random poset from a random DAG on a shuffled order (closure taken by build)."""
    order = list(range(n))
    rng.shuffle(order)
    pairs = [
        (order[i], order[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.35
    ]
    return build_causal_set(range(n), pairs)


@st.composite
def posets_with_regions(draw, max_points=5, regions=2):
    n = draw(st.integers(1, max_points))
    seed = draw(st.integers(0, 2**32 - 1))
    site = random_poset(random.Random(seed), n)
    subsets = [frozenset(draw(st.sets(st.sampled_from(range(n))))) for _ in range(regions)]
    return site, subsets


def random_box(rng: random.Random, span: int = 6):
    """Random nonempty box with half-integer bounds, some open, some infinite."""
    from fractions import Fraction

    from screenoff import minkowski as mk

    def axis():
        a, b = sorted(Fraction(rng.randint(-span, span), 2) for _ in range(2))
        if a == b and rng.random() < 0.5:
            return mk.closed(a), mk.closed(a)
        lo = mk.INF if rng.random() < 0.2 else mk.Bound(a, rng.random() < 0.5)
        hi = mk.INF if rng.random() < 0.2 else mk.Bound(b, rng.random() < 0.5)
        return lo, hi

    while True:
        (ul, uh), (vl, vh) = axis(), axis()
        box = mk.make_box(ul, uh, vl, vh)
        if box is not None:
            return box


def random_boxes(rng: random.Random, max_boxes: int = 3):
    return [random_box(rng) for _ in range(rng.randint(0, max_boxes))]


def random_point(rng: random.Random, span: int = 16):
    from fractions import Fraction

    # quarter grid: hits every half-integer bound exactly and points between them
    return Fraction(rng.randint(-span, span), 4), Fraction(rng.randint(-span, span), 4)


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
