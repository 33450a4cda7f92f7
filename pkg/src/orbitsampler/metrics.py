"""Accuracy metrics comparing estimates against exact counts."""

from __future__ import annotations

import numpy as np


def nrmse(values, exact: float) -> float | None:
    """Root mean squared deviation from the exact value, normalized by it.

    Undefined (returns None) when the exact count is zero; needs at least
    two runs to be meaningful.
    """
    arr = np.asarray(values, dtype=float)
    if arr.size < 2:
        raise ValueError("nrmse needs at least two runs")
    if exact == 0:
        return None
    return float(np.sqrt(np.mean((arr - exact) ** 2)) / exact)


def l1_l2(estimates, exact) -> tuple[float, float]:
    """L1 and L2 distances between the two normalized orbit-degree vectors.

    Both vectors are scaled to sum to one first; a zero-sum vector has no
    normalization and raises ValueError.
    """
    a = np.asarray(estimates, dtype=float)
    b = np.asarray(exact, dtype=float)
    if a.shape != b.shape:
        raise ValueError("vectors must have equal length")
    sa, sb = a.sum(), b.sum()
    if sa <= 0 or sb <= 0:
        raise ValueError("cannot normalize a zero-sum vector")
    delta = a / sa - b / sb
    return float(np.abs(delta).sum()), float(np.sqrt((delta**2).sum()))


def topk_detection(estimates, exact, k: int, orbit_ids=None) -> int:
    """Overlap between the top-k orbits of the two vectors.

    Ranking ties break towards the smaller orbit id in both vectors.
    """
    a = np.asarray(estimates, dtype=float)
    b = np.asarray(exact, dtype=float)
    if orbit_ids is None:
        orbit_ids = list(range(1, len(a) + 1))
    if not (len(a) == len(b) == len(orbit_ids)):
        raise ValueError("vectors and orbit ids must have equal length")
    if k > len(a):
        raise ValueError(f"k = {k} exceeds the {len(a)} orbits")

    def top(vec) -> set[int]:
        order = sorted(zip(vec, orbit_ids), key=lambda t: (-t[0], t[1]))
        return {oid for _, oid in order[:k]}

    return len(top(a) & top(b))
