"""Fitness sharing and niche occupancy.

Costs here may be negative (well depths), so crowding is an additive penalty
``cost + beta * (m - 1)`` rather than the classic division by niche count.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from genopt import kernels
from genopt.errors import DomainError, StateError


@dataclass(frozen=True)
class SharingConfig:
    enabled: bool = False
    sigma: float = 0.15
    alpha: float = 1.0
    beta: float = 0.2

    def __post_init__(self):
        if not self.sigma > 0:
            raise DomainError("sharing sigma must be > 0")
        if not self.alpha > 0:
            raise DomainError("sharing alpha must be > 0")
        if self.beta < 0:
            raise DomainError("sharing beta must be >= 0")


def normalize(points, lo, hi) -> np.ndarray:
    lo = np.asarray(lo, dtype=np.float64)
    return (np.asarray(points, dtype=np.float64) - lo) / (np.asarray(hi, dtype=np.float64) - lo)


def niche_counts(points, lo, hi, sigma: float, alpha: float = 1.0) -> np.ndarray:
    """``m_i = sum_j sh(d_ij)`` over range-normalized Euclidean distances."""
    z = normalize(np.atleast_2d(points), lo, hi)
    return kernels.niche_counts(z, float(sigma), float(alpha))


def shared_costs(costs, points, lo, hi, cfg: SharingConfig) -> np.ndarray:
    costs = np.asarray(costs, dtype=np.float64)
    if costs.ndim == 2 and costs.shape[1] == 1:
        costs = costs[:, 0]
    if not cfg.enabled:
        return costs.copy()
    m = niche_counts(points, lo, hi, cfg.sigma, cfg.alpha)
    return costs + cfg.beta * (m - 1.0)


def shared_cost(pop, spec, cfg: SharingConfig) -> np.ndarray:
    """Shared cost of every member of an evaluated single-objective population."""
    if not pop.evaluated:
        raise StateError("sharing needs an evaluated population")
    if pop.costs.shape[1] != 1:
        raise DomainError("sharing applies to single-objective populations")
    return shared_costs(pop.costs[:, 0], spec.decode(pop.bits), spec.lo, spec.hi, cfg)


def niche_assign(points, centers) -> np.ndarray:
    """Index of the nearest center for every point; ties go to the lower index."""
    centers = np.asarray(centers, dtype=np.float64)
    if centers.ndim != 2 or centers.shape[0] == 0:
        raise DomainError("niche report needs at least one center")
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    d2 = ((pts[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    return np.argmin(d2, axis=1)  # argmin returns the first minimum


def niche_report(points, centers) -> np.ndarray:
    """Occupant count of each center's nearest-point niche; sums to len(points)."""
    centers = np.asarray(centers, dtype=np.float64)
    if centers.ndim != 2 or centers.shape[0] == 0:
        raise DomainError("niche report needs at least one center")
    if len(points) == 0:
        return np.zeros(centers.shape[0], dtype=np.int64)
    return np.bincount(niche_assign(points, centers), minlength=centers.shape[0])
