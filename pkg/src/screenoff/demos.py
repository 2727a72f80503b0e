"""The two worked examples: the causal-finiteness counterexample and a Simpson reversal."""
from __future__ import annotations

from fractions import Fraction

from . import minkowski as mk
from .causal_order import build_causal_set
from .regionexpr import format_region
from .stochastic import StochasticCausalModel, correlation


def counterexample(u_star=1) -> dict:
    """Regions for O = {u >= 0, v <= 0, u <= u*} in the Minkowski plane.

    ``matches`` is True iff O' and O'' come out as the strict quadrant
    {u < 0, v > 0} and the closed quadrant {u >= 0, v <= 0}, and the latter
    fails to contain its own past (so O counts as causally finite).
    """
    u_star = Fraction(u_star)
    if u_star <= 0:
        raise ValueError(f"u* must be positive, got {u_star}")
    region = mk.normalize([mk.Box(mk.closed(0), mk.closed(u_star), mk.INF, mk.closed(0))])
    comp = mk.spacelike_complement(region)
    closure = mk.spacelike_complement(comp)
    past = mk.causal_past(closure)
    excess = mk.region_difference(past, closure)
    finite = not mk.is_causally_infinite_rsp(region)
    expected_comp = mk.normalize([mk.Box(mk.INF, mk.opened(0), mk.opened(0), mk.INF)])
    expected_closure = mk.normalize([mk.Box(mk.closed(0), mk.INF, mk.INF, mk.closed(0))])
    return {
        "u_star": u_star,
        "O": region,
        "O'": comp,
        "(O')'": closure,
        "J-((O')')": past,
        "J-((O')') \\ (O')'": excess,
        "contains_own_past": excess.is_empty,
        "causally_finite": finite,
        "matches": comp == expected_comp and closure == expected_closure and finite and not excess.is_empty,
    }


def format_counterexample(result: dict) -> dict:
    out = {k: format_region(v) if isinstance(v, mk.MinkRegion) else v for k, v in result.items()}
    out["u_star"] = f"{result['u_star'].numerator}/{result['u_star'].denominator}"
    return out


def simpson_model():
    """Four equally likely outcomes; x's partition couples a and b.

    A = {1,2} and B = {1,3} are independent, but given F = {1,4} at x they
    are correlated.
    """
    site = build_causal_set(["x", "a", "b"], [("x", "a"), ("x", "b")])
    m = StochasticCausalModel.create(
        site,
        ["1", "2", "3", "4"],
        {w: Fraction(1, 4) for w in "1234"},
        {"x": [["1", "4"], ["2", "3"]], "a": [["1", "2"], ["3", "4"]], "b": [["1", "3"], ["2", "4"]]},
    )
    events = {"A": frozenset("12"), "B": frozenset("13"), "F": frozenset("14")}
    return m, events


def simpson_numbers() -> dict:
    m, ev = simpson_model()
    return {
        "unconditional": correlation(m, ev["A"], ev["B"]),
        "given_F": correlation(m, ev["A"], ev["B"], ev["F"]),
    }
