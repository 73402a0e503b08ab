"""The generational loop: initialize, breed, merge, eliminate, repeat.

All randomness is drawn from generators derived from
``(seed, generation, purpose tag)``, so a run is a pure function of its
:class:`RunConfig` and evaluation order inside a generation never matters.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from genopt import kernels
from genopt.errors import DomainError, EvaluationError
from genopt.genome import GenomeSpec
from genopt.landscapes import Landscape
from genopt.operators import (
    OperatorConfig,
    apply_mutations,
    breed,
    elimination_mask,
    tournament_indices,
)
from genopt.population import Individual, Population
from genopt.sharing import SharingConfig, niche_report, normalize, shared_costs

log = logging.getLogger(__name__)

TAG_INIT = 1
TAG_SELECT = 2
TAG_CROSSOVER = 3
TAG_MUTATION = 4
TAG_ELIMINATE = 5
TAG_EVAL = 6

COHORT_INIT = 0
COHORT_OFFSPRING = 1
COHORT_PARENTS = 2

IMPROVEMENT_EPS = 1e-12

__all__ = [
    "Individual", "Population", "RunConfig", "RunTrace", "TraceRow",
    "derive_rng", "init_population", "step", "run",
]


def derive_rng(seed: int, *path: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), *map(int, path)]))


def derive_seed(seed: int, *path: int) -> int:
    """A 64-bit child seed, e.g. for sub-runs."""
    return int(np.random.SeedSequence([int(seed), *map(int, path)]).generate_state(1, np.uint64)[0])


@dataclass
class RunConfig:
    genome: GenomeSpec
    landscape: Landscape
    seed: int = 0
    N: int = 50
    G: int = 100
    operators: OperatorConfig = field(default_factory=OperatorConfig)
    sharing: SharingConfig = field(default_factory=SharingConfig)
    target_cost: float | None = None
    stagnation_window: int | None = None

    def __post_init__(self):
        if self.N < 2:
            raise DomainError("population size N must be >= 2")
        if self.G < 0:
            raise DomainError("generation budget G must be >= 0")
        if not 0 <= self.seed < 2 ** 64:
            raise DomainError("seed must be a 64-bit unsigned integer")
        if self.operators.elite_count >= self.N:
            raise DomainError("elite_count must be below N")
        if self.genome.p != self.landscape.p:
            raise DomainError(f"genome has {self.genome.p} parameters, landscape expects {self.landscape.p}")
        if self.stagnation_window is not None and self.stagnation_window < 1:
            raise DomainError("stagnation window must be >= 1")
        if hasattr(self.landscape, "check_horizon"):
            self.landscape.check_horizon(self.G)


@dataclass(frozen=True)
class TraceRow:
    generation: int
    best_cost: float
    mean_cost: float
    median_cost: float
    best_x: tuple[float, ...]
    diversity: float
    evaluations: int
    niche_counts: tuple[int, ...] | None = None


@dataclass
class RunTrace:
    rows: list[TraceRow] = field(default_factory=list)
    mutations: list[int] = field(default_factory=list)
    snapshots: dict[int, np.ndarray] = field(default_factory=dict)
    final: Population | None = None

    def __len__(self):
        return len(self.rows)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows])

    @property
    def best(self) -> TraceRow:
        return self.rows[-1]


def _evaluate(cfg: RunConfig, bits: np.ndarray, t: int, cohort: int) -> np.ndarray:
    x = cfg.genome.decode(bits)
    try:
        return cfg.landscape.evaluate(x, t, derive_rng(cfg.seed, t, TAG_EVAL, cohort))
    except EvaluationError as exc:
        raise EvaluationError(f"generation {t}: {exc}", generation=t) from exc


def init_population(cfg: RunConfig) -> Population:
    rng = derive_rng(cfg.seed, 0, TAG_INIT)
    bits = rng.integers(0, 2, size=(cfg.N, cfg.genome.length), dtype=np.uint8)
    return Population(bits, _evaluate(cfg, bits, 0, COHORT_INIT), generation=0)


Ranker = Callable[[Population, RunConfig], "tuple[np.ndarray, np.ndarray]"]


def scalar_keys(pop: Population, cfg: RunConfig):
    """(selection keys, elite keys): shared cost when enabled, raw cost for elites."""
    raw = pop.costs[:, 0]
    if cfg.sharing.enabled:
        pts = cfg.genome.decode(pop.bits)
        return shared_costs(raw, pts, cfg.genome.lo, cfg.genome.hi, cfg.sharing), raw
    return raw, raw


@dataclass(frozen=True)
class StepInfo:
    evaluations: int
    mutations: int


def _step(pop: Population, cfg: RunConfig, ranker: Ranker = scalar_keys):
    pop.require_evaluated()
    t1 = pop.generation + 1
    ops = cfg.operators
    n = cfg.N
    keys, _ = ranker(pop, cfg)
    parents = tournament_indices(keys, n, derive_rng(cfg.seed, t1, TAG_SELECT), ops.tournament_win_prob)
    offspring = breed(pop.bits, parents, ops.crossover_prob, derive_rng(cfg.seed, t1, TAG_CROSSOVER))
    offspring, n_mut = apply_mutations(offspring, ops.mutations_per_generation, derive_rng(cfg.seed, t1, TAG_MUTATION))
    evals = n
    off_costs = _evaluate(cfg, offspring, t1, COHORT_OFFSPRING)
    if cfg.landscape.needs_reevaluation:
        parent_costs = _evaluate(cfg, pop.bits, t1, COHORT_PARENTS)
        evals += len(pop)
    else:
        parent_costs = pop.costs
    pool = Population(
        np.vstack([pop.bits, offspring]),
        np.vstack([parent_costs, off_costs]),
        np.concatenate([pop.born_at, np.full(n, t1, dtype=np.int64)]),
        generation=t1,
    )
    keys, elite_keys = ranker(pool, cfg)
    mask = elimination_mask(keys, elite_keys, n, ops.elite_count,
                            derive_rng(cfg.seed, t1, TAG_ELIMINATE), ops.tournament_win_prob)
    return pool.take(np.flatnonzero(mask), generation=t1), StepInfo(evals, n_mut)


def step(pop: Population, cfg: RunConfig) -> Population:
    """One generation: N offspring, merge with (re-evaluated) parents, cut back to N."""
    return _step(pop, cfg)[0]


def diversity(points, lo, hi) -> float:
    """Mean pairwise Euclidean distance of range-normalized points."""
    return float(kernels.mean_pairwise_distance(normalize(points, lo, hi)))


def trace_row(pop: Population, cfg: RunConfig, evaluations: int) -> TraceRow:
    costs = pop.costs[:, 0]
    pts = cfg.genome.decode(pop.bits)
    b = int(np.argmin(costs))
    centers = cfg.landscape.niche_centers(pop.generation)
    niches = None if centers is None else tuple(int(c) for c in niche_report(pts, centers))
    return TraceRow(
        generation=pop.generation,
        best_cost=float(costs[b]),
        mean_cost=float(costs.mean()),
        median_cost=float(np.median(costs)),
        best_x=tuple(float(v) for v in pts[b]),
        diversity=diversity(pts, cfg.genome.lo, cfg.genome.hi),
        evaluations=evaluations,
        niche_counts=niches,
    )


def snapshot_generations(G: int) -> list[int]:
    return sorted({0, G // 4, G // 2, (3 * G) // 4, G})


def run(cfg: RunConfig, snapshots=(), on_generation=None) -> RunTrace:
    """Run up to ``cfg.G`` generations; one trace row per generation incl. t=0.

    ``snapshots`` lists generations whose decoded populations are kept;
    ``on_generation(pop)`` is called after every generation (including 0).
    """
    if cfg.landscape.k != 1:
        raise DomainError("run() is single-objective; scalarize or use the Pareto engine")
    wanted = set(snapshots)
    trace = RunTrace()
    pop = init_population(cfg)
    evals = len(pop)
    best = np.inf

    def record(p):
        nonlocal best
        trace.rows.append(trace_row(p, cfg, evals))
        if p.generation in wanted:
            trace.snapshots[p.generation] = cfg.genome.decode(p.bits)
        if on_generation is not None:
            on_generation(p)

    record(pop)
    best = trace.rows[-1].best_cost
    stale = 0
    for _ in range(cfg.G):
        if cfg.target_cost is not None and trace.rows[-1].best_cost <= cfg.target_cost:
            break
        if cfg.stagnation_window is not None and stale >= cfg.stagnation_window:
            break
        pop, info = _step(pop, cfg)
        evals += info.evaluations
        trace.mutations.append(info.mutations)
        record(pop)
        cur = trace.rows[-1].best_cost
        if cur < best - IMPROVEMENT_EPS:
            best = cur
            stale = 0
        else:
            stale += 1
    trace.final = pop
    log.debug("run seed=%d finished at t=%d, best=%.6g", cfg.seed, pop.generation, trace.rows[-1].best_cost)
    return trace
