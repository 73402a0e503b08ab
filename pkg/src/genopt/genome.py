"""Binary genotypes: parameter specs, decoding/encoding and schema counts.

Genes are plain (non-Gray) big-endian unsigned integers, concatenated in
parameter order. A chromosome is a 1-D ``uint8`` array of 0/1 values; a
population's genotypes are stacked into an ``(N, L)`` array.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from genopt.errors import DomainError, StructuralError

INTRINSIC = "intrinsic"
EXTRINSIC = "extrinsic"


@dataclass(frozen=True)
class ParamSpec:
    name: str
    lo: float
    hi: float
    bits: int = 16
    kind: str = INTRINSIC

    def __post_init__(self):
        if not self.lo < self.hi:
            raise DomainError(f"parameter {self.name!r}: need lo < hi, got [{self.lo}, {self.hi}]")
        if not 1 <= self.bits <= 32:
            raise DomainError(f"parameter {self.name!r}: bits must be in 1..32, got {self.bits}")
        if self.kind not in (INTRINSIC, EXTRINSIC):
            raise DomainError(f"parameter {self.name!r}: kind must be intrinsic or extrinsic")

    @property
    def levels(self) -> int:
        return (1 << self.bits) - 1

    @property
    def step(self) -> float:
        """Quantization step in parameter units."""
        return (self.hi - self.lo) / self.levels


BINARY = "binary"
GRAY = "gray"


@dataclass(frozen=True)
class GenomeSpec:
    params: tuple[ParamSpec, ...]
    coding: str = BINARY
    _weights: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        params = tuple(self.params)
        if not params:
            raise DomainError("genome needs at least one parameter")
        if self.coding not in (BINARY, GRAY):
            raise DomainError(f"coding must be {BINARY!r} or {GRAY!r}, got {self.coding!r}")
        object.__setattr__(self, "params", params)
        weights = np.zeros((sum(p.bits for p in params), len(params)))
        pos = 0
        for j, p in enumerate(params):
            weights[pos:pos + p.bits, j] = 2.0 ** np.arange(p.bits - 1, -1, -1)
            pos += p.bits
        weights.flags.writeable = False
        object.__setattr__(self, "_weights", weights)

    @classmethod
    def uniform(cls, p, lo, hi, bits=16, kind=INTRINSIC, coding=BINARY):
        return cls(tuple(ParamSpec(f"x{j}", lo, hi, bits, kind) for j in range(p)), coding)

    @property
    def length(self) -> int:
        return self._weights.shape[0]

    @property
    def p(self) -> int:
        return len(self.params)

    @property
    def lo(self) -> np.ndarray:
        return np.array([q.lo for q in self.params])

    @property
    def hi(self) -> np.ndarray:
        return np.array([q.hi for q in self.params])

    @property
    def span(self) -> np.ndarray:
        return self.hi - self.lo

    @property
    def steps(self) -> np.ndarray:
        return np.array([q.step for q in self.params])

    @property
    def extrinsic_mask(self) -> np.ndarray:
        return np.array([q.kind == EXTRINSIC for q in self.params])

    def gene_slices(self) -> list[slice]:
        out, pos = [], 0
        for q in self.params:
            out.append(slice(pos, pos + q.bits))
            pos += q.bits
        return out

    def subspec(self, indices) -> "GenomeSpec":
        return GenomeSpec(tuple(self.params[i] for i in indices), self.coding)

    def integers(self, bits) -> np.ndarray:
        """Unsigned integer value of every gene; shape ``(..., p)``."""
        b = _check_bits(self, bits)
        if self.coding == GRAY:
            b = np.array(b, dtype=np.uint8)
            for sl in self.gene_slices():
                b[..., sl] = np.bitwise_xor.accumulate(b[..., sl], axis=-1)
        return b.astype(np.float64) @ self._weights

    def decode(self, bits) -> np.ndarray:
        """Decode one chromosome ``(L,)`` or a stack ``(N, L)`` to parameters."""
        u = self.integers(bits)
        levels = np.array([float(q.levels) for q in self.params])
        return self.lo + (u / levels) * self.span

    def encode(self, x) -> np.ndarray:
        """Nearest-level chromosome for the point ``x`` (ties round up)."""
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.p,):
            raise StructuralError(f"expected {self.p} parameters, got shape {x.shape}")
        out = np.empty(self.length, dtype=np.uint8)
        for q, x_j, sl in zip(self.params, x, self.gene_slices()):
            if not q.lo <= x_j <= q.hi:
                raise DomainError(f"parameter {q.name!r}={x_j} outside [{q.lo}, {q.hi}]")
            u = _nearest_level(q, float(x_j))
            if self.coding == GRAY:
                u ^= u >> 1
            out[sl] = [(u >> s) & 1 for s in range(q.bits - 1, -1, -1)]
        return out


def _level_value(q: ParamSpec, u: int) -> float:
    # same operation order as GenomeSpec.decode
    return q.lo + (float(u) / float(q.levels)) * (q.hi - q.lo)


def _nearest_level(q: ParamSpec, x: float) -> int:
    u = math.floor((x - q.lo) / (q.hi - q.lo) * q.levels + 0.5)
    # the scaled value can land on the wrong side of a midpoint; settle it on decoded values
    best, best_err = None, math.inf
    for cand in (u + 1, u, u - 1):
        if 0 <= cand <= q.levels:
            err = abs(_level_value(q, cand) - x)
            if err < best_err:
                best, best_err = cand, err
    return best


def _check_bits(spec: GenomeSpec, bits) -> np.ndarray:
    b = np.asarray(bits)
    if b.ndim == 0 or b.shape[-1] != spec.length:
        raise StructuralError(f"chromosome length {b.shape[-1] if b.ndim else 0} != genome length {spec.length}")
    if b.dtype != np.bool_ and np.any(b > 1):
        raise StructuralError("chromosome entries must be 0 or 1")
    return b


def decode(spec: GenomeSpec, bits) -> np.ndarray:
    return spec.decode(bits)


def encode(spec: GenomeSpec, x) -> np.ndarray:
    return spec.encode(x)


def bits_from_str(s: str) -> np.ndarray:
    if not s or set(s) - {"0", "1"}:
        raise StructuralError(f"not a bit string: {s!r}")
    return np.frombuffer(s.encode("ascii"), dtype=np.uint8) - ord("0")


def bits_to_str(bits) -> str:
    return "".join("1" if b else "0" for b in np.asarray(bits).ravel())


class Schema:
    """Template over {0, 1, *}; ``*`` matches either bit."""

    def __init__(self, pattern: str):
        if not pattern or set(pattern) - {"0", "1", "*"}:
            raise StructuralError(f"schema must be a non-empty string over 0/1/*: {pattern!r}")
        self.pattern = pattern
        self.fixed = np.array([c != "*" for c in pattern])
        self.values = np.array([1 if c == "1" else 0 for c in pattern], dtype=np.uint8)

    def __len__(self):
        return len(self.pattern)

    def __repr__(self):
        return f"Schema({self.pattern!r})"

    @property
    def order(self) -> int:
        return int(self.fixed.sum())

    def matches(self, bits) -> np.ndarray:
        b = np.atleast_2d(np.asarray(bits))
        if b.shape[1] != len(self):
            raise StructuralError(f"chromosome length {b.shape[1]} != schema length {len(self)}")
        return np.all((b == self.values) | ~self.fixed, axis=1)

    def refines(self, other: "Schema") -> bool:
        """True when every position fixed in ``other`` is fixed here to the same value."""
        if len(other) != len(self):
            return False
        return bool(np.all(~other.fixed | (self.fixed & (self.values == other.values))))


def schema_count(population, schema: Schema) -> int:
    """Number of chromosomes in ``population`` matching ``schema``.

    ``population`` may be a :class:`~genopt.engine.Population` or an
    ``(N, L)`` bit array.
    """
    bits = getattr(population, "bits", population)
    bits = np.asarray(bits)
    if bits.ndim != 2:
        bits = np.atleast_2d(bits)
    if bits.shape[0] == 0:
        return 0
    return int(schema.matches(bits).sum())
