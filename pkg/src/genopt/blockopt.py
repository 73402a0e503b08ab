"""Block-coordinate search: a GA per parameter block, others frozen.

Each block result is adopted only if it lowers the incumbent cost, so the
incumbent is monotone even though every block run is stochastic. The GA for
block ``b`` in cycle ``c`` uses seed ``derive_seed(seed, c, b)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from genopt.engine import RunConfig, derive_rng, derive_seed, run
from genopt.errors import DomainError, UnsupportedConfiguration
from genopt.landscapes import Landscape

TAG_INCUMBENT = 11


@dataclass(frozen=True)
class BlockPartition:
    blocks: tuple[tuple[int, ...], ...]
    N: int = 50
    G: int = 60
    tolerance: float = 1e-6
    max_cycles: int = 50

    def __post_init__(self):
        blocks = tuple(tuple(int(i) for i in b) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        if not blocks or any(not b for b in blocks):
            raise DomainError("partition needs non-empty blocks")
        if not self.tolerance > 0:
            raise DomainError("cycle tolerance must be > 0")
        if self.max_cycles < 1:
            raise DomainError("max_cycles must be >= 1")

    def check(self, p: int):
        flat = sorted(i for b in self.blocks for i in b)
        if flat != list(range(p)):
            raise DomainError(f"blocks {self.blocks} do not partition 0..{p - 1}")


def parse_blocks(spec: str) -> tuple[tuple[int, ...], ...]:
    """``"0,1|2,3"`` -> ``((0, 1), (2, 3))``."""
    try:
        return tuple(tuple(int(i) for i in grp.split(",")) for grp in spec.split("|"))
    except ValueError as exc:
        raise DomainError(f"bad block spec {spec!r}: {exc}") from None


class BlockView(Landscape):
    """The landscape restricted to ``indices``, other coordinates fixed at ``frozen``."""

    def __init__(self, base: Landscape, indices, frozen):
        idx = np.asarray(indices, dtype=np.intp)
        super().__init__(base.lo[idx], base.hi[idx])
        self.base = base
        self.indices = idx
        self.frozen = np.array(frozen, dtype=np.float64)
        self.k = base.k

    def expand(self, X):
        full = np.repeat(self.frozen[None, :], X.shape[0], axis=0)
        full[:, self.indices] = X
        return full

    def _evaluate(self, X, t, rng):
        return self.base.evaluate(self.expand(X), t, rng)


@dataclass(frozen=True)
class BlockStep:
    cycle: int
    block: int
    incumbent_cost: float
    adopted: bool


@dataclass
class BlockResult:
    x: np.ndarray
    cost: float
    cycles: int
    history: list[BlockStep] = field(default_factory=list)


def block_optimize(cfg: RunConfig, partition: BlockPartition) -> BlockResult:
    """Cycle a GA over the blocks of ``partition``.

    ``cfg`` supplies the genome, landscape, operators and master seed; its
    N and G are replaced by the partition's per-block budget.
    """
    land = cfg.landscape
    if land.needs_reevaluation:
        raise UnsupportedConfiguration("block optimization needs a static, noiseless landscape")
    if land.k != 1:
        raise UnsupportedConfiguration("block optimization is single-objective")
    spec = cfg.genome
    partition.check(spec.p)
    rng = derive_rng(cfg.seed, 0, TAG_INCUMBENT)
    x = spec.decode(rng.integers(0, 2, size=spec.length, dtype=np.uint8))
    fx = land(x)
    history = []
    cycles = 0
    for c in range(partition.max_cycles):
        start = fx
        for b, idx in enumerate(partition.blocks):
            sub = replace(
                cfg,
                genome=spec.subspec(idx),
                landscape=BlockView(land, idx, x),
                seed=derive_seed(cfg.seed, c, b),
                N=partition.N,
                G=partition.G,
                target_cost=None,
                stagnation_window=None,
            )
            best = run(sub).best
            adopted = best.best_cost < fx
            if adopted:
                x = x.copy()
                x[list(idx)] = best.best_x
                fx = best.best_cost
            history.append(BlockStep(c, b, fx, adopted))
        cycles = c + 1
        if start == 0 or start - fx < partition.tolerance * abs(start):
            break
    return BlockResult(x, fx, cycles, history)
