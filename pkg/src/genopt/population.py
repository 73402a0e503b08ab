from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from genopt.errors import StateError


@dataclass(frozen=True)
class Individual:
    chromosome: np.ndarray
    cost: tuple[float, ...] | None
    born_at: int

    @property
    def evaluated(self) -> bool:
        return self.cost is not None


@dataclass
class Population:
    """Genotypes stacked row-wise plus their cached objective values.

    ``costs`` is ``(N, k)`` once evaluated, ``None`` before.
    """

    bits: np.ndarray
    costs: np.ndarray | None = None
    born_at: np.ndarray | None = None
    generation: int = 0

    def __post_init__(self):
        self.bits = np.asarray(self.bits, dtype=np.uint8)
        if self.bits.ndim != 2:
            raise ValueError("population bits must be a 2-D (N, L) array")
        if self.born_at is None:
            self.born_at = np.full(len(self.bits), self.generation, dtype=np.int64)
        if self.costs is not None:
            self.costs = np.asarray(self.costs, dtype=np.float64).reshape(len(self.bits), -1)

    def __len__(self):
        return self.bits.shape[0]

    def __getitem__(self, i) -> Individual:
        cost = None if self.costs is None else tuple(float(c) for c in self.costs[i])
        return Individual(self.bits[i].copy(), cost, int(self.born_at[i]))

    @classmethod
    def from_individuals(cls, members, generation=0):
        members = list(members)
        bits = np.array([m.chromosome for m in members], dtype=np.uint8)
        if all(m.evaluated for m in members):
            costs = np.array([m.cost for m in members], dtype=np.float64)
        else:
            costs = None
        born = np.array([m.born_at for m in members], dtype=np.int64)
        return cls(bits, costs, born, generation)

    @property
    def evaluated(self) -> bool:
        return self.costs is not None

    @property
    def k(self) -> int:
        self.require_evaluated()
        return self.costs.shape[1]

    def require_evaluated(self):
        if self.costs is None:
            raise StateError("population has unevaluated individuals")

    def take(self, idx, generation=None) -> "Population":
        idx = np.asarray(idx)
        return Population(
            self.bits[idx].copy(),
            None if self.costs is None else self.costs[idx].copy(),
            self.born_at[idx].copy(),
            self.generation if generation is None else generation,
        )

    @staticmethod
    def concat(a: "Population", b: "Population", generation=None) -> "Population":
        costs = None
        if a.costs is not None and b.costs is not None:
            costs = np.vstack([a.costs, b.costs])
        return Population(
            np.vstack([a.bits, b.bits]),
            costs,
            np.concatenate([a.born_at, b.born_at]),
            a.generation if generation is None else generation,
        )
