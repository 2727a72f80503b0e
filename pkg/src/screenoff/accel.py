"""Batch verdicts for screening-off conditions on many measures at once.

All models sharing a site and a family of local partitions share one
:class:`ScreeningPlan`; only the integer weight vectors differ.  The plan
lists the distinct (A, B, past) checks each requested condition needs, so a
batch of models costs one kernel call.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import lcm

import numpy as np

from . import _kernels
from .causal_order import iter_bits
from .stochastic import VARIANTS, StochasticCausalModel, past_mask, spacelike_pairs


@dataclass
class ScreeningPlan:
    variants: tuple
    checks: list  # (a_mask, b_mask, past_mask)
    cells: np.ndarray  # (n_checks, n_outcomes) flattened table cell per outcome
    shapes: np.ndarray  # (n_checks, 3) atom counts of A, B, past
    members: dict  # variant name -> indices into ``checks``


def block_index(m: StochasticCausalModel) -> np.ndarray:
    """``idx[p, w]`` = which block of point ``p``'s partition holds outcome ``w``."""
    idx = np.zeros((m.site.n, len(m.outcomes)), dtype=np.int64)
    for p, blocks in enumerate(m.block_masks):
        for k, block in enumerate(blocks):
            for w in iter_bits(block):
                idx[p, w] = k
    return idx


def _atom_index(blocks: np.ndarray, radix: list, region: int):
    idx = np.zeros(blocks.shape[1], dtype=np.int64)
    count = 1
    for p in iter_bits(region):
        idx = idx * radix[p] + blocks[p]
        count *= radix[p]
    return idx, count


def build_plan(m: StochasticCausalModel, variants=("so1", "so2")) -> ScreeningPlan:
    """Plan for ``m``'s site and partitions; the measure of ``m`` is ignored."""
    site = m.site
    blocks = block_index(m)
    radix = [len(b) for b in m.block_masks]
    keys: dict = {}
    members = {}
    for name in variants:
        v = VARIANTS[name]
        ids = []
        # the condition is symmetric in A and B, so unordered pairs suffice
        for a, b in spacelike_pairs(site, v.eligibility, ordered=False):
            key = (a, b, past_mask(site, v.past, a, b))
            ids.append(keys.setdefault(key, len(keys)))
        members[name] = np.array(ids, dtype=np.int64)
    checks = list(keys)
    n_out = len(m.outcomes)
    cells = np.zeros((len(checks), n_out), dtype=np.int64)
    shapes = np.zeros((len(checks), 3), dtype=np.int64)
    for c, (a, b, past) in enumerate(checks):
        ia, na = _atom_index(blocks, radix, a)
        ib, nb = _atom_index(blocks, radix, b)
        ip, nf = _atom_index(blocks, radix, past)
        cells[c] = (ia * nb + ib) * nf + ip
        shapes[c] = (na, nb, nf)
    return ScreeningPlan(tuple(variants), checks, cells, shapes, members)


def integer_weights(m: StochasticCausalModel) -> np.ndarray:
    """The measure of ``m`` scaled by the lcm of its denominators."""
    scale = lcm(*(w.denominator for w in m.weights))
    return np.array([int(w * scale) for w in m.weights], dtype=np.int64)


def variant_verdicts(plan: ScreeningPlan, weights: np.ndarray, backend: str | None = None) -> dict:
    """Per variant, a boolean array saying which weight rows satisfy it."""
    weights = np.atleast_2d(np.asarray(weights, dtype=np.int64))
    ok = _kernels.screening_ok(weights, plan.cells, plan.shapes, backend)
    return {name: ok[:, ids].all(axis=1) for name, ids in plan.members.items()}


def check_fast(m: StochasticCausalModel, variant: str, backend: str | None = None) -> bool:
    plan = build_plan(m, (variant,))
    return bool(variant_verdicts(plan, integer_weights(m), backend)[variant][0])
