"""Deterministic compass (pattern) search, the local baseline.

Polls ``+step, -step`` along axis 0, then axis 1, and so on; the first strict
improvement is taken and polling restarts from axis 0 at the same step. A
poll with no improvement halves (``shrink``) every step.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from genopt.errors import DomainError


@dataclass(frozen=True)
class PatternConfig:
    initial_step: float = 0.1
    shrink: float = 0.5
    min_step: float = 1e-6
    max_evals: int = 10_000

    def __post_init__(self):
        if not 0 < self.shrink < 1:
            raise DomainError("shrink must lie in (0, 1)")
        if not self.min_step > 0:
            raise DomainError("min_step must be > 0")
        if not self.initial_step > 0:
            raise DomainError("initial_step must be > 0")
        if self.max_evals < 1:
            raise DomainError("max_evals must be >= 1")


@dataclass
class PatternResult:
    x: np.ndarray
    cost: float
    evals: int
    path: list[tuple[np.ndarray, float]] = field(default_factory=list)


def pattern_search(landscape, x0, cfg: PatternConfig = PatternConfig(), t: int = 0, rng=None) -> PatternResult:
    """Minimize ``landscape`` (frozen at generation ``t``) from ``x0``.

    ``initial_step`` and ``min_step`` are fractions of each coordinate's range.
    ``path`` lists the accepted incumbents, starting with ``x0``. ``rng`` is
    only consulted by landscapes with per-evaluation noise.
    """
    lo, hi = landscape.lo, landscape.hi
    x = np.array(x0, dtype=np.float64)
    if x.shape != lo.shape:
        raise DomainError(f"start point needs {lo.shape[0]} coordinates")
    if np.any(x < lo) or np.any(x > hi):
        raise DomainError(f"start point {x0} outside the box")
    span = hi - lo
    step = cfg.initial_step * span
    min_step = cfg.min_step * span
    fx = landscape(x, t, rng)
    evals = 1
    path = [(x.copy(), fx)]
    while evals < cfg.max_evals and np.any(step >= min_step):
        moved = False
        for j in range(x.shape[0]):
            for sign in (1.0, -1.0):
                trial = x.copy()
                trial[j] = min(max(x[j] + sign * step[j], lo[j]), hi[j])
                if trial[j] == x[j]:
                    continue
                ft = landscape(trial, t, rng)
                evals += 1
                if ft < fx:
                    x, fx = trial, ft
                    path.append((x.copy(), fx))
                    moved = True
                    break
                if evals >= cfg.max_evals:
                    break
            if moved or evals >= cfg.max_evals:
                break
        if not moved:
            step = step * cfg.shrink
    return PatternResult(x, fx, evals, path)
