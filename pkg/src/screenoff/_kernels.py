"""Batch screening-off kernels.

Each check is a triple (region A, region B, past region).  For one model the
probability mass is binned into a table ``T[a, b, f]`` over the atoms of the
three algebras, and the check passes iff for every ``f`` with positive mass

    T[a, b, f] * M[f] == T[a, :, f].sum() * T[:, b, f].sum()

for all ``a``, ``b``.  Weights are integers, so this is exact.

Two implementations with identical results: a numba loop kernel and a
vectorised numpy one.  ``SCREENOFF_BACKEND=numpy`` (or a missing numba)
selects the numpy path.
"""
from __future__ import annotations

import os

import numpy as np

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

# keeps weight * weight products well inside int64
MAX_TOTAL_WEIGHT = 2**31


def screening_ok_numpy(weights: np.ndarray, cells: np.ndarray, shapes: np.ndarray) -> np.ndarray:
    n_models, n_out = weights.shape
    out = np.ones((n_models, len(cells)), dtype=np.bool_)
    rows = np.arange(n_out)
    for c in range(len(cells)):
        na, nb, nf = shapes[c]
        onehot = np.zeros((n_out, na * nb * nf), dtype=np.int64)
        onehot[rows, cells[c]] = 1
        table = (weights @ onehot).reshape(n_models, na, nb, nf)
        mass = table.sum(axis=(1, 2))
        marg_a = table.sum(axis=2)
        marg_b = table.sum(axis=1)
        lhs = table * mass[:, None, None, :]
        rhs = marg_a[:, :, None, :] * marg_b[:, None, :, :]
        ok = (lhs == rhs) | (mass == 0)[:, None, None, :]
        out[:, c] = ok.reshape(n_models, -1).all(axis=1)
    return out


def _screening_ok_loops(weights, cells, shapes):
    n_models, n_out = weights.shape
    n_checks = cells.shape[0]
    biggest = 1
    for c in range(n_checks):
        size = shapes[c, 0] * shapes[c, 1] * shapes[c, 2]
        if size > biggest:
            biggest = size
    out = np.ones((n_models, n_checks), dtype=np.bool_)
    table = np.zeros(biggest, dtype=np.int64)
    marg_a = np.zeros(biggest, dtype=np.int64)
    marg_b = np.zeros(biggest, dtype=np.int64)
    for m in range(n_models):
        for c in range(n_checks):
            na, nb, nf = shapes[c, 0], shapes[c, 1], shapes[c, 2]
            table[: na * nb * nf] = 0
            for w in range(n_out):
                table[cells[c, w]] += weights[m, w]
            ok = True
            for f in range(nf):
                mass = 0
                marg_a[:na] = 0
                marg_b[:nb] = 0
                for a in range(na):
                    for b in range(nb):
                        t = table[(a * nb + b) * nf + f]
                        marg_a[a] += t
                        marg_b[b] += t
                        mass += t
                if mass == 0:
                    continue
                for a in range(na):
                    for b in range(nb):
                        if table[(a * nb + b) * nf + f] * mass != marg_a[a] * marg_b[b]:
                            ok = False
                            break
                    if not ok:
                        break
                if not ok:
                    break
            out[m, c] = ok
    return out


if HAVE_NUMBA:
    screening_ok_numba = numba.njit(cache=True, nogil=True)(_screening_ok_loops)
else:  # pragma: no cover
    screening_ok_numba = None


def backend() -> str:
    choice = os.environ.get("SCREENOFF_BACKEND", "").strip().lower()
    if choice not in ("", "numba", "numpy"):
        raise ValueError(f"SCREENOFF_BACKEND must be 'numba' or 'numpy', not {choice!r}")
    if choice == "numpy" or not HAVE_NUMBA:
        return "numpy"
    return "numba"


def screening_ok(weights, cells, shapes, which: str | None = None) -> np.ndarray:
    """Boolean ``(n_models, n_checks)`` array of per-check screening verdicts."""
    weights = np.ascontiguousarray(weights, dtype=np.int64)
    cells = np.ascontiguousarray(cells, dtype=np.int64)
    shapes = np.ascontiguousarray(shapes, dtype=np.int64)
    if weights.size and weights.sum(axis=1).max() >= MAX_TOTAL_WEIGHT:
        raise OverflowError("total integer weight too large for exact int64 screening")
    if len(cells) == 0:
        return np.ones((len(weights), 0), dtype=np.bool_)
    if (which or backend()) == "numba":
        return screening_ok_numba(weights, cells, shapes)
    return screening_ok_numpy(weights, cells, shapes)
