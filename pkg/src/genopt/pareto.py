"""Pareto dominance, non-dominated sorting, crowding and scalarization.

All objectives are minimized.
"""
from __future__ import annotations

import numpy as np

from genopt import kernels
from genopt.errors import DomainError, StructuralError


def dominates(a, b) -> bool:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise StructuralError(f"objective vectors differ in length: {a.shape} vs {b.shape}")
    return bool(np.all(a <= b) and np.any(a < b))


def front_ranks(points) -> np.ndarray:
    f = np.asarray(points, dtype=np.float64)
    if f.ndim != 2 or f.shape[0] == 0:
        raise DomainError("non-dominated sort needs a non-empty (n, k) array")
    return kernels.front_ranks(f)


def nondominated_sort(points) -> list[list[int]]:
    """Fronts as ascending index lists; front 0 is the non-dominated set."""
    rank = front_ranks(points)
    return [np.flatnonzero(rank == r).tolist() for r in range(int(rank.max()) + 1)]


def crowding(points) -> np.ndarray:
    """Crowding distance within one front: per objective, the normalized gap
    between a point's two sorted neighbours, summed; extremes are infinite.
    """
    f = np.asarray(points, dtype=np.float64)
    n, k = f.shape
    out = np.zeros(n)
    if n <= 2:
        out[:] = np.inf
        return out
    for c in range(k):
        order = np.argsort(f[:, c], kind="stable")
        col = f[order, c]
        span = col[-1] - col[0]
        out[order[0]] = np.inf
        out[order[-1]] = np.inf
        if span > 0:
            out[order[1:-1]] += (col[2:] - col[:-2]) / span
    return out


def rank_keys(costs) -> np.ndarray:
    """Scalar selection key from (front index, then larger crowding).

    Equal (front, crowding) pairs share a key. With one objective crowding is
    not used, so keys order exactly like the raw costs.
    """
    f = np.asarray(costs, dtype=np.float64)
    front = front_ranks(f)
    crowd = np.zeros(f.shape[0])
    if f.shape[1] >= 2:
        for r in np.unique(front):
            idx = np.flatnonzero(front == r)
            crowd[idx] = crowding(f[idx])
    order = np.lexsort((-crowd, front))
    keys = np.empty(f.shape[0])
    prev = None
    level = -1
    for i in order:
        cur = (front[i], crowd[i])
        if cur != prev:
            level += 1
            prev = cur
        keys[i] = level
    return keys


def nondominated_mask(points) -> np.ndarray:
    """Mask of front-0 members; two objectives use an O(n log n) sweep."""
    f = np.asarray(points, dtype=np.float64)
    n = f.shape[0]
    if n == 0:
        return np.zeros(0, dtype=bool)
    if f.shape[1] != 2:
        return front_ranks(f) == 0
    order = np.lexsort((f[:, 1], f[:, 0]))
    mask = np.zeros(n, dtype=bool)
    best2 = np.inf
    i = 0
    while i < n:
        # group of identical first objective
        j = i
        while j + 1 < n and f[order[j + 1], 0] == f[order[i], 0]:
            j += 1
        g2 = f[order[i], 1]  # smallest second objective in the group
        if g2 < best2:
            for t in range(i, j + 1):
                if f[order[t], 1] == g2:
                    mask[order[t]] = True
            best2 = g2
        i = j + 1
    return mask


def check_weights(w, k: int) -> np.ndarray:
    w = np.asarray(w, dtype=np.float64)
    if w.shape != (k,):
        raise DomainError(f"need {k} weights, got shape {w.shape}")
    if np.any(w < 0) or not np.all(np.isfinite(w)) or abs(w.sum() - 1.0) > 1e-9:
        raise DomainError("weights must be non-negative and sum to 1")
    return w


def scalarize(v, w) -> float:
    v = np.asarray(v, dtype=np.float64)
    w = check_weights(w, v.shape[0])
    return float(np.dot(w, v))
