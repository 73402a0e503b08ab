"""Pareto variant of the generational loop plus a non-dominated archive."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from genopt.engine import RunConfig, _step, init_population
from genopt.errors import StructuralError
from genopt.pareto import dominates, nondominated_mask, rank_keys
from genopt.population import Population


def pareto_keys(pop: Population, cfg: RunConfig):
    keys = rank_keys(pop.costs)
    return keys, keys


def multiobjective_step(pop: Population, cfg: RunConfig) -> Population:
    """Engine step ranking by (front index, then crowding) instead of raw cost."""
    return _step(pop, cfg, pareto_keys)[0]


@dataclass
class Archive:
    """Mutually non-dominated (chromosome, objectives) pairs seen so far."""

    bits: np.ndarray
    costs: np.ndarray

    @classmethod
    def empty(cls, length: int, k: int) -> "Archive":
        return cls(np.zeros((0, length), dtype=np.uint8), np.zeros((0, k)))

    def __len__(self):
        return self.bits.shape[0]

    def update(self, bits, costs) -> "Archive":
        allb = np.vstack([self.bits, bits])
        allc = np.vstack([self.costs, costs])
        _, first = np.unique(allb, axis=0, return_index=True)
        first = np.sort(first)
        allb, allc = allb[first], allc[first]
        keep = nondominated_mask(allc)
        return Archive(allb[keep], allc[keep])

    def has_dominated_pair(self) -> bool:
        c = self.costs
        for i in range(len(c)):
            for j in range(len(c)):
                if i != j and dominates(c[i], c[j]):
                    return True
        return False


@dataclass
class FrontResult:
    archive: Archive
    final: Population
    evaluations: int
    front_sizes: list[int] = field(default_factory=list)


def run_front(cfg: RunConfig, on_generation=None) -> FrontResult:
    """Run the Pareto engine for ``cfg.G`` generations, archiving front 0 each time."""
    if cfg.landscape.k < 1:
        raise StructuralError("landscape has no objectives")
    pop = init_population(cfg)
    evals = len(pop)
    archive = Archive.empty(cfg.genome.length, pop.costs.shape[1]).update(pop.bits, pop.costs)
    sizes = [len(archive)]
    if on_generation is not None:
        on_generation(pop, archive)
    for _ in range(cfg.G):
        pop, info = _step(pop, cfg, pareto_keys)
        evals += info.evaluations
        archive = archive.update(pop.bits, pop.costs)
        sizes.append(len(archive))
        if on_generation is not None:
            on_generation(pop, archive)
    return FrontResult(archive, pop, evals, sizes)
