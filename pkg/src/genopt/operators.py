"""Genetic operators: single-point crossover, bit-flip mutation, binary
tournament pairing and stochastic tournament elimination.

Randomness always comes from an explicit ``numpy.random.Generator``.
Selection functions read a per-individual *key* (lower is better); by default
the key is the first objective, the engine substitutes shared costs or Pareto
ranks where needed.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from genopt import kernels
from genopt.errors import DomainError, StateError, StructuralError
from genopt.population import Individual, Population


@dataclass(frozen=True)
class OperatorConfig:
    crossover_prob: float = 0.9
    mutations_per_generation: float = 3.0
    tournament_win_prob: float = 0.9
    elite_count: int = 1

    def __post_init__(self):
        if not 0.0 <= self.crossover_prob <= 1.0:
            raise DomainError("crossover_prob must lie in [0, 1]")
        if self.mutations_per_generation < 0:
            raise DomainError("mutations_per_generation must be >= 0")
        if not 0.5 <= self.tournament_win_prob <= 1.0:
            raise DomainError("tournament_win_prob must lie in [0.5, 1]")
        if self.elite_count < 0:
            raise DomainError("elite_count must be >= 0")


def crossover(a, b, site: int):
    """Swap the tails of ``a`` and ``b`` after ``site`` bits."""
    a = np.asarray(a, dtype=np.uint8)
    b = np.asarray(b, dtype=np.uint8)
    if a.shape != b.shape or a.ndim != 1:
        raise StructuralError(f"parents differ in shape: {a.shape} vs {b.shape}")
    L = a.shape[0]
    if L < 2 or not 1 <= site <= L - 1:
        raise StructuralError(f"crossover site {site} outside 1..{L - 1}")
    c1 = np.concatenate([a[:site], b[site:]])
    c2 = np.concatenate([b[:site], a[site:]])
    return c1, c2


def mutate(c, index: int):
    c = np.asarray(c, dtype=np.uint8)
    if not 0 <= index < c.shape[0]:
        raise StructuralError(f"mutation index {index} outside 0..{c.shape[0] - 1}")
    out = c.copy()
    out[index] ^= 1
    return out


def _keys_of(pop: Population, keys):
    if keys is not None:
        return np.asarray(keys, dtype=np.float64)
    if not pop.evaluated:
        raise StateError("selection needs an evaluated population")
    return pop.costs[:, 0]


def tournament_indices(keys, n_picks: int, rng: np.random.Generator, q: float) -> np.ndarray:
    """Indices of ``n_picks`` binary-tournament winners.

    Each tournament draws two distinct members uniformly; the lower key wins
    with probability ``q``. Equal keys favour the first-drawn member.
    """
    keys = np.asarray(keys, dtype=np.float64)
    n = keys.shape[0]
    if n == 0:
        raise DomainError("cannot pick from an empty population")
    if n == 1:
        return np.zeros(n_picks, dtype=np.intp)
    i = rng.integers(0, n, size=n_picks)
    j = rng.integers(0, n - 1, size=n_picks)
    j = j + (j >= i)
    u = rng.random(n_picks)
    first_better = keys[i] <= keys[j]
    better = np.where(first_better, i, j)
    worse = np.where(first_better, j, i)
    return np.where(u < q, better, worse)


def pick_parent(pop: Population, rng: np.random.Generator, q: float = 0.9, keys=None) -> Individual:
    k = _keys_of(pop, keys)
    return pop[int(tournament_indices(k, 1, rng, q)[0])]


def elimination_mask(keys, elite_keys, n: int, elite_count: int, rng: np.random.Generator, q: float) -> np.ndarray:
    """Boolean mask of the ``n`` survivors of a pool.

    The ``elite_count`` members with lowest ``elite_keys`` (stable order) are
    protected; the rest face tournament elimination on ``keys``.
    """
    keys = np.asarray(keys, dtype=np.float64)
    size = keys.shape[0]
    if n > size:
        raise DomainError(f"cannot keep {n} of a pool of {size}")
    if n < 1:
        raise DomainError("survivor count must be >= 1")
    if elite_count > n:
        raise DomainError(f"elite_count {elite_count} exceeds survivor count {n}")
    protected = np.zeros(size, dtype=bool)
    if elite_count:
        order = np.argsort(np.asarray(elite_keys, dtype=np.float64), kind="stable")
        protected[order[:elite_count]] = True
        if elite_count == n:
            return protected
    rounds = size - n
    uniforms = rng.random((rounds, 3))
    return kernels.eliminate_rounds(keys, protected, n, uniforms, q)


def eliminate_to_size(pool: Population, n: int, elite_count: int, rng: np.random.Generator,
                      q: float = 0.9, keys=None) -> Population:
    k = _keys_of(pool, keys)
    if not pool.evaluated:
        raise StateError("elimination needs an evaluated pool")
    mask = elimination_mask(k, pool.costs[:, 0] if keys is None else k, n, elite_count, rng, q)
    return pool.take(np.flatnonzero(mask))


def breed(bits: np.ndarray, parents: np.ndarray, crossover_prob: float, rng: np.random.Generator) -> np.ndarray:
    """Offspring of consecutive parent pairs (rows ``parents[0::2]``, ``parents[1::2]``).

    A pair crosses with probability ``crossover_prob`` at a uniform site in
    1..L-1; otherwise both parents are cloned. An odd trailing parent is cloned.
    """
    n_off = parents.shape[0]
    n_pairs = n_off // 2
    L = bits.shape[1]
    a = bits[parents[0:2 * n_pairs:2]]
    b = bits[parents[1:2 * n_pairs:2]]
    u = rng.random(n_pairs)
    sites = rng.integers(1, L, size=n_pairs) if L >= 2 else np.zeros(n_pairs, dtype=np.int64)
    cross = (u < crossover_prob) & (L >= 2)
    sites = np.where(cross, sites, L)
    head = np.arange(L)[None, :] < sites[:, None]
    out = np.empty((n_off, L), dtype=np.uint8)
    out[0:2 * n_pairs:2] = np.where(head, a, b)
    out[1:2 * n_pairs:2] = np.where(head, b, a)
    if n_off % 2:
        out[-1] = bits[parents[-1]]
    return out


def apply_mutations(bits: np.ndarray, m: float, rng: np.random.Generator):
    """Flip a Poisson(``m``) number of uniformly placed bits across the cohort.

    Returns the mutated copy and the number of flips drawn.
    """
    out = bits.copy()
    count = int(rng.poisson(m)) if m > 0 else 0
    if count:
        flat = out.reshape(-1)
        pos = rng.integers(0, flat.shape[0], size=count)
        np.bitwise_xor.at(flat, pos, 1)
    return out, count
