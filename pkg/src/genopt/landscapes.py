"""Objective functions over a parameter box.

Every landscape evaluates a batch ``X`` of shape ``(n, p)`` at generation
``t`` and returns an ``(n, k)`` array of costs to minimize. The well-based
landscapes are sums of Gaussian wells; dynamic variants move, re-weight or
replace those wells over time.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from genopt.errors import DomainError, EvaluationError

STATIC = "static"
DRIFT = "drift"
RUPTURE = "rupture"
CATASTROPHE = "catastrophe"
DYNAMICS_KINDS = (STATIC, DRIFT, RUPTURE, CATASTROPHE)

PHASE = "phase"
WHITE = "white"

TAG_NOISE_PHASE = 101
TAG_NOISE_WHITE = 102


@dataclass(frozen=True)
class Well:
    center: tuple[float, ...]
    depth: float
    width: float

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        if not self.depth > 0:
            raise DomainError(f"well depth must be > 0, got {self.depth}")
        if not self.width > 0:
            raise DomainError(f"well width must be > 0, got {self.width}")


CANONICAL_BOX = (0.0, 10.0)
CANONICAL_WELLS = (
    Well((7.5, 7.5), 4.0, 0.9),
    Well((2.0, 2.0), 3.0, 0.9),
    Well((2.0, 8.0), 2.5, 0.9),
    Well((8.0, 2.0), 2.0, 0.9),
)
TWIN_WELLS = (
    Well((2.5, 5.0), 3.0, 0.9),
    Well((7.5, 5.0), 3.0, 0.9),
)
RUPTURE_WELLS = (
    Well((2.5, 5.0), 4.0, 1.2),
    Well((7.5, 5.0), 2.0, 1.2),
)
CATASTROPHE_NEW_WELL = Well((1.0, 9.0), 4.0, 1.5)
CANONICAL_CATASTROPHE = (CATASTROPHE_NEW_WELL,)


def _well_arrays(wells):
    centers = np.array([w.center for w in wells], dtype=np.float64)
    depths = np.array([w.depth for w in wells], dtype=np.float64)
    widths = np.array([w.width for w in wells], dtype=np.float64)
    return centers, depths, widths


def _wells_batch(centers, depths, widths, X):
    out = np.zeros(X.shape[0])
    for c, d, s in zip(centers, depths, widths):
        diff = X - c
        r2 = np.einsum("ij,ij->i", diff, diff)
        out -= d * np.exp(-r2 / (2.0 * s * s))
    return out


def wells_eval(wells, x) -> float:
    """Sum of Gaussian wells ``-d * exp(-|x - c|^2 / (2 s^2))`` at one point."""
    centers, depths, widths = _well_arrays(wells)
    return float(_wells_batch(centers, depths, widths, np.asarray(x, dtype=np.float64)[None, :])[0])


def reflect(pos, lo, hi):
    """Fold positions into ``[lo, hi]`` by mirror reflection at the walls."""
    span = hi - lo
    y = np.mod(np.asarray(pos, dtype=np.float64) - lo, 2.0 * span)
    return lo + np.where(y > span, 2.0 * span - y, y)


@dataclass(frozen=True)
class NoiseConfig:
    amplitude: float = 0.0
    wavelength: float = 0.5
    mode: str = PHASE

    def __post_init__(self):
        if self.amplitude < 0:
            raise DomainError("noise amplitude must be >= 0")
        if not self.wavelength > 0:
            raise DomainError("noise wavelength must be > 0")
        if self.mode not in (PHASE, WHITE):
            raise DomainError(f"noise mode must be {PHASE!r} or {WHITE!r}")


@dataclass(frozen=True)
class DynamicsSchedule:
    """How a well landscape changes with generation ``t``.

    ``drift``: all centers move by ``velocity`` per generation, mirrored at
    the box walls. ``rupture``: exactly two wells; the first loses
    ``rate`` depth per generation, the second gains it. ``catastrophe``: at
    ``t >= event_time`` every existing depth is scaled by ``depth_factor`` and
    ``new_wells`` appear.
    """

    kind: str = STATIC
    velocity: tuple[float, ...] = (0.02, 0.01)
    rate: float = 0.02
    event_time: int = 60
    depth_factor: float = 0.5
    new_wells: tuple[Well, ...] = CANONICAL_CATASTROPHE

    def __post_init__(self):
        if self.kind not in DYNAMICS_KINDS:
            raise DomainError(f"dynamics kind must be one of {DYNAMICS_KINDS}, got {self.kind!r}")
        object.__setattr__(self, "velocity", tuple(float(v) for v in self.velocity))
        object.__setattr__(self, "new_wells", tuple(self.new_wells))
        if self.rate < 0:
            raise DomainError("rupture rate must be >= 0")
        if not self.depth_factor > 0:
            raise DomainError("catastrophe depth_factor must be > 0")

    def crossing_time(self, wells) -> float:
        """Generation at which the two rupture depths are equal."""
        a, b = wells
        if self.rate == 0:
            return float("inf")
        return (a.depth - b.depth) / (2.0 * self.rate)


class Landscape:
    """Base class; subclasses implement ``_evaluate``."""

    k = 1
    dynamic = False
    noisy = False

    def __init__(self, lo, hi):
        self.lo = np.asarray(lo, dtype=np.float64)
        self.hi = np.asarray(hi, dtype=np.float64)
        if self.lo.shape != self.hi.shape or np.any(self.lo >= self.hi):
            raise DomainError("landscape box needs lo < hi in every coordinate")

    @property
    def p(self) -> int:
        return self.lo.shape[0]

    @property
    def needs_reevaluation(self) -> bool:
        return self.dynamic or self.noisy

    def evaluate(self, X, t: int = 0, rng=None) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.p:
            raise EvaluationError(f"expected {self.p} parameters, got {X.shape[1]}", generation=t)
        out = np.asarray(self._evaluate(X, t, rng), dtype=np.float64).reshape(X.shape[0], self.k)
        if not np.all(np.isfinite(out)):
            raise EvaluationError("landscape returned a non-finite cost", generation=t)
        return out

    def __call__(self, x, t: int = 0, rng=None):
        """Single point; returns a float for k=1, else an array."""
        out = self.evaluate(np.asarray(x, dtype=np.float64)[None, :], t, rng)[0]
        return float(out[0]) if self.k == 1 else out

    def _evaluate(self, X, t, rng):
        raise NotImplementedError

    def wells_at(self, t: int):
        return None

    def niche_centers(self, t: int):
        """Fixed-length array of niche reference points, or ``None``."""
        wells = self.wells_at(t)
        return None if wells is None else np.array([w.center for w in wells])

    def global_center(self, t: int):
        wells = self.wells_at(t)
        if not wells:
            return None
        deepest = max(range(len(wells)), key=lambda i: (wells[i].depth, -i))
        return np.array(wells[deepest].center)


class WellsLandscape(Landscape):
    """Gaussian wells, optionally driven by a :class:`DynamicsSchedule`."""

    def __init__(self, wells=CANONICAL_WELLS, lo=None, hi=None, schedule: DynamicsSchedule | None = None,
                 extrinsic_mask=None):
        wells = tuple(wells)
        if not wells:
            raise DomainError("need at least one well")
        p = len(wells[0].center)
        if any(len(w.center) != p for w in wells):
            raise DomainError("all well centers need the same dimension")
        lo = np.full(p, CANONICAL_BOX[0]) if lo is None else lo
        hi = np.full(p, CANONICAL_BOX[1]) if hi is None else hi
        super().__init__(lo, hi)
        for w in wells:
            if np.any(np.array(w.center) < self.lo) or np.any(np.array(w.center) > self.hi):
                raise DomainError(f"well center {w.center} outside the box")
        self.wells = wells
        self.schedule = schedule or DynamicsSchedule()
        self.dynamic = self.schedule.kind != STATIC
        s = self.schedule
        if s.kind == DRIFT:
            v = np.asarray(s.velocity, dtype=np.float64)
            if v.shape != (p,):
                raise DomainError(f"drift velocity needs {p} components")
            if extrinsic_mask is not None and np.any(extrinsic_mask):
                # only extrinsic coordinates are perturbed when any are declared
                v = np.where(np.asarray(extrinsic_mask, dtype=bool), v, 0.0)
            self._velocity = v
        elif s.kind == RUPTURE:
            if len(wells) != 2:
                raise DomainError("rupture dynamics needs exactly two wells")
        elif s.kind == CATASTROPHE:
            for w in s.new_wells:
                if len(w.center) != p:
                    raise DomainError("catastrophe well dimension mismatch")
        self._static_arrays = _well_arrays(wells)

    def wells_at(self, t: int):
        s = self.schedule
        if s.kind == STATIC:
            return self.wells
        if s.kind == DRIFT:
            return tuple(
                replace(w, center=tuple(reflect(np.array(w.center) + t * self._velocity, self.lo, self.hi)))
                for w in self.wells
            )
        if s.kind == RUPTURE:
            a, b = self.wells
            # depths clamp at a tiny positive value past the horizon of the ramp
            da = max(a.depth - s.rate * t, 1e-12)
            db = b.depth + s.rate * t
            return (replace(a, depth=da), replace(b, depth=db))
        if t < s.event_time:
            return self.wells
        return tuple(replace(w, depth=w.depth * s.depth_factor) for w in self.wells) + s.new_wells

    def niche_centers(self, t: int):
        wells = self.wells_at(t)
        if self.schedule.kind == CATASTROPHE:
            # same column set before and after the event
            wells = self.wells + self.schedule.new_wells
        return np.array([w.center for w in wells])

    def check_horizon(self, generations: int):
        s = self.schedule
        if s.kind == RUPTURE and self.wells[0].depth - s.rate * generations < 0:
            raise DomainError(f"rupture ramp drives the first depth below 0 before t={generations}")

    def _evaluate(self, X, t, rng):
        if self.schedule.kind == STATIC:
            arrays = self._static_arrays
        else:
            arrays = _well_arrays(self.wells_at(t))
        return _wells_batch(*arrays, X)


def dynamic_eval(schedule: DynamicsSchedule, wells, x, t: int, lo=None, hi=None) -> float:
    return WellsLandscape(wells, lo, hi, schedule)(x, t)


class NoisyLandscape(Landscape):
    """Adds ``A * prod_j sin(2 pi x_j / wavelength + phi_j)`` to a base landscape.

    Phases are drawn once from ``seed``. In ``white`` mode the perturbation
    is instead uniform in ``[-A, A]``, drawn per evaluation from ``rng``.
    """

    def __init__(self, base: Landscape, noise: NoiseConfig, seed: int = 0):
        super().__init__(base.lo, base.hi)
        self.base = base
        self.noise = noise
        self.seed = seed
        self.k = base.k
        self.dynamic = base.dynamic
        self.noisy = noise.amplitude > 0
        rng = np.random.default_rng(np.random.SeedSequence([seed, TAG_NOISE_PHASE]))
        self.phases = rng.uniform(0.0, 2.0 * np.pi, size=base.p)
        self.phases.flags.writeable = False

    def perturbation(self, X, t=0, rng=None):
        A = self.noise.amplitude
        if A == 0:
            return np.zeros(X.shape[0])
        if self.noise.mode == WHITE:
            if rng is None:
                rng = np.random.default_rng(np.random.SeedSequence([self.seed, TAG_NOISE_WHITE, t]))
            return A * (2.0 * rng.random(X.shape[0]) - 1.0)
        return A * np.prod(np.sin(2.0 * np.pi * X / self.noise.wavelength + self.phases), axis=1)

    def _evaluate(self, X, t, rng):
        base = self.base.evaluate(X, t, rng)
        return base + self.perturbation(X, t, rng)[:, None]

    def wells_at(self, t):
        return self.base.wells_at(t)

    def niche_centers(self, t):
        return self.base.niche_centers(t)

    def global_center(self, t):
        return self.base.global_center(t)

    def check_horizon(self, generations):
        if hasattr(self.base, "check_horizon"):
            self.base.check_horizon(generations)


def noisy_eval(base: Landscape, noise: NoiseConfig, x, t: int = 0, seed: int = 0) -> float:
    return NoisyLandscape(base, noise, seed)(x, t)


class Paraboloid(Landscape):
    """``sum_j (x_j - c_j)^2``; the sphere when ``c`` is the origin."""

    def __init__(self, center, lo, hi):
        super().__init__(lo, hi)
        self.center = np.asarray(center, dtype=np.float64)
        if self.center.shape != self.lo.shape:
            raise DomainError("paraboloid center dimension mismatch")

    def _evaluate(self, X, t, rng):
        d = X - self.center
        return np.einsum("ij,ij->i", d, d)

    def global_center(self, t):
        return self.center.copy()


class CoupledQuadratic(Landscape):
    """``(x - y)^2 + 0.1 (x + y - 4)^2``, minimized at (2, 2)."""

    def __init__(self, lo=(1.0, 1.0), hi=(3.0, 3.0)):
        super().__init__(lo, hi)
        if self.p != 2:
            raise DomainError("coupled quadratic is two-dimensional")

    def _evaluate(self, X, t, rng):
        x, y = X[:, 0], X[:, 1]
        return (x - y) ** 2 + 0.1 * (x + y - 4.0) ** 2

    def global_center(self, t):
        return np.array([2.0, 2.0])


class BiObjective(Landscape):
    """``(sum x_j^2, sum (x_j - 2)^2)``; the Pareto set is the segment [0, 2]^p diagonal."""

    k = 2

    def _evaluate(self, X, t, rng):
        return np.column_stack([np.sum(X ** 2, axis=1), np.sum((X - 2.0) ** 2, axis=1)])


class Scalarized(Landscape):
    """Weighted sum of a vector landscape's objectives."""

    def __init__(self, base: Landscape, weights):
        super().__init__(base.lo, base.hi)
        from genopt.pareto import check_weights

        self.base = base
        self.weights = check_weights(weights, base.k)
        self.dynamic = base.dynamic
        self.noisy = base.noisy

    def _evaluate(self, X, t, rng):
        return self.base.evaluate(X, t, rng) @ self.weights

    def wells_at(self, t):
        return self.base.wells_at(t)

    def global_center(self, t):
        return self.base.global_center(t)
