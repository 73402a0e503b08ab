"""Strict JSON experiment configuration.

Unknown keys are fatal; absent keys take the defaults below. Every problem is
reported as a :class:`ConfigError` naming the offending key path.

Document layout (all sections optional)::

    {
      "seed": 0,
      "run": {"N": 50, "G": 100,
              "stop": {"target_cost": null, "stagnation_window": null}},
      "genome": {"coding": "binary",
                 "params": [{"name": "x0", "lo": 0, "hi": 10, "bits": 16,
                             "kind": "intrinsic"}, ...]},
      "landscape": {"id": "wells", "preset": null, "wells": null,
                    "center": null,
                    "dynamics": {"kind": "static", "velocity": [0.02, 0.01],
                                 "rate": 0.02, "event_time": 60,
                                 "depth_factor": 0.5, "new_wells": null},
                    "noise": {"amplitude": 0.0, "wavelength": 0.5,
                              "mode": "phase"}},
      "operators": {"crossover_prob": 0.9, "mutations_per_generation": 3.0,
                    "tournament_win_prob": 0.9, "elite_count": 1},
      "sharing": {"enabled": false, "sigma": 0.15, "alpha": 1.0, "beta": 0.2},
      "objectives": {"k": null, "weights": null},
      "blockopt": {"N": 30, "G": 60, "tolerance": 1e-6, "max_cycles": 50}
    }

The default genome is two 16-bit parameters on [0, 10]. Landscape ids:
``wells`` (presets ``canonical``, ``twin``, ``rupture``; default is
``rupture`` under rupture dynamics, else ``canonical``), ``paraboloid``
(``center`` defaults to the box midpoint), ``sphere``, ``coupled_quadratic``
and ``biobjective`` (two objectives).
"""
from __future__ import annotations

import copy
import json
from dataclasses import dataclass

import numpy as np

from genopt.blockopt import BlockPartition
from genopt.engine import RunConfig
from genopt.errors import GenoptError
from genopt.genome import BINARY, INTRINSIC, GenomeSpec, ParamSpec
from genopt.landscapes import (
    CANONICAL_CATASTROPHE,
    CANONICAL_WELLS,
    RUPTURE,
    RUPTURE_WELLS,
    TWIN_WELLS,
    BiObjective,
    CoupledQuadratic,
    DynamicsSchedule,
    NoiseConfig,
    NoisyLandscape,
    Paraboloid,
    Scalarized,
    Well,
    WellsLandscape,
)
from genopt.operators import OperatorConfig
from genopt.pareto import check_weights
from genopt.sharing import SharingConfig


class ConfigError(GenoptError, ValueError):
    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


DEFAULTS = {
    "seed": 0,
    "run": {"N": 50, "G": 100, "stop": {"target_cost": None, "stagnation_window": None}},
    "genome": {
        "coding": BINARY,
        "params": [
            {"name": "x0", "lo": 0.0, "hi": 10.0, "bits": 16, "kind": INTRINSIC},
            {"name": "x1", "lo": 0.0, "hi": 10.0, "bits": 16, "kind": INTRINSIC},
        ],
    },
    "landscape": {
        "id": "wells",
        "preset": None,
        "wells": None,
        "center": None,
        "dynamics": {
            "kind": "static",
            "velocity": [0.02, 0.01],
            "rate": 0.02,
            "event_time": 60,
            "depth_factor": 0.5,
            "new_wells": None,
        },
        "noise": {"amplitude": 0.0, "wavelength": 0.5, "mode": "phase"},
    },
    "operators": {
        "crossover_prob": 0.9,
        "mutations_per_generation": 3.0,
        "tournament_win_prob": 0.9,
        "elite_count": 1,
    },
    "sharing": {"enabled": False, "sigma": 0.15, "alpha": 1.0, "beta": 0.2},
    "objectives": {"k": None, "weights": None},
    "blockopt": {"N": 30, "G": 60, "tolerance": 1e-6, "max_cycles": 50},
}
PARAM_DEFAULTS = {"name": None, "lo": None, "hi": None, "bits": 16, "kind": INTRINSIC}
WELL_KEYS = {"center", "depth", "width"}
LANDSCAPE_IDS = ("wells", "paraboloid", "sphere", "coupled_quadratic", "biobjective")
PRESETS = {"canonical": CANONICAL_WELLS, "twin": TWIN_WELLS, "rupture": RUPTURE_WELLS}


def _merge(defaults, given, path):
    if not isinstance(given, dict):
        raise ConfigError(path or "<root>", "expected an object")
    out = {}
    for key in given:
        if key not in defaults:
            raise ConfigError(f"{path}.{key}" if path else key, "unknown key")
    for key, dflt in defaults.items():
        sub = f"{path}.{key}" if path else key
        if key not in given:
            out[key] = copy.deepcopy(dflt)
        elif isinstance(dflt, dict):
            out[key] = _merge(dflt, given[key], sub)
        else:
            out[key] = given[key]
    return out


def _number(value, key, integer=False, allow_none=False):
    if value is None and allow_none:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(key, f"expected a number, got {value!r}")
    if integer:
        if isinstance(value, float) and not value.is_integer():
            raise ConfigError(key, f"expected an integer, got {value!r}")
        return int(value)
    return float(value)


def _vector(value, key, length=None):
    if not isinstance(value, list) or not value:
        raise ConfigError(key, "expected a non-empty list of numbers")
    out = [_number(v, f"{key}[{i}]") for i, v in enumerate(value)]
    if length is not None and len(out) != length:
        raise ConfigError(key, f"expected {length} values, got {len(out)}")
    return out


def _wells(value, key, p):
    if not isinstance(value, list) or not value:
        raise ConfigError(key, "expected a non-empty list of wells")
    out = []
    for i, w in enumerate(value):
        wkey = f"{key}[{i}]"
        if not isinstance(w, dict):
            raise ConfigError(wkey, "expected an object")
        extra = set(w) - WELL_KEYS
        if extra:
            raise ConfigError(f"{wkey}.{sorted(extra)[0]}", "unknown key")
        missing = WELL_KEYS - set(w)
        if missing:
            raise ConfigError(f"{wkey}.{sorted(missing)[0]}", "missing")
        try:
            out.append(Well(tuple(_vector(w["center"], f"{wkey}.center", p)),
                            _number(w["depth"], f"{wkey}.depth"), _number(w["width"], f"{wkey}.width")))
        except GenoptError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(wkey, str(exc)) from None
    return tuple(out)


@dataclass
class Experiment:
    """A parsed configuration; ``run_config(seed)`` builds the engine input."""

    doc: dict
    genome: GenomeSpec
    operators: OperatorConfig
    sharing: SharingConfig
    blocks: dict
    native_k: int
    weights: np.ndarray | None

    @property
    def seed(self) -> int:
        return self.doc["seed"]

    @property
    def k(self) -> int:
        return 1 if self.weights is not None else self.native_k

    def landscape(self, seed: int, scalarize: bool = True):
        land = _build_landscape(self.doc["landscape"], self.genome, seed)
        if scalarize and self.weights is not None:
            land = Scalarized(land, self.weights)
        return land

    def run_config(self, seed: int | None = None, scalarize: bool = True) -> RunConfig:
        seed = self.seed if seed is None else seed
        run = self.doc["run"]
        return RunConfig(
            genome=self.genome,
            landscape=self.landscape(seed, scalarize),
            seed=seed,
            N=run["N"],
            G=run["G"],
            operators=self.operators,
            sharing=self.sharing,
            target_cost=run["stop"]["target_cost"],
            stagnation_window=run["stop"]["stagnation_window"],
        )

    def partition(self, blocks) -> BlockPartition:
        b = self.blocks
        if blocks is None:
            blocks = tuple((j,) for j in range(self.genome.p))
        try:
            part = BlockPartition(blocks, N=b["N"], G=b["G"], tolerance=b["tolerance"], max_cycles=b["max_cycles"])
            part.check(self.genome.p)
        except GenoptError as exc:
            raise ConfigError("blocks", str(exc)) from None
        return part


def _guard(key, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except ConfigError:
        raise
    except (GenoptError, TypeError) as exc:
        raise ConfigError(key, str(exc)) from None


def _build_landscape(ls, genome: GenomeSpec, seed: int):
    lo, hi, p = genome.lo, genome.hi, genome.p
    dyn = ls["dynamics"]
    kind = dyn["kind"]
    lid = ls["id"]
    if lid == "wells":
        if ls["wells"] is not None and ls["preset"] is not None:
            raise ConfigError("landscape.wells", "give either wells or preset, not both")
        if ls["wells"] is not None:
            wells = _wells(ls["wells"], "landscape.wells", p)
        else:
            preset = ls["preset"] or ("rupture" if kind == RUPTURE else "canonical")
            if preset not in PRESETS:
                raise ConfigError("landscape.preset", f"unknown preset {preset!r}; have {sorted(PRESETS)}")
            wells = PRESETS[preset]
            if p != 2:
                raise ConfigError("genome.params", f"well presets are two-dimensional, genome has {p} parameters")
        new_wells = CANONICAL_CATASTROPHE if dyn["new_wells"] is None else _wells(dyn["new_wells"], "landscape.dynamics.new_wells", p)
        velocity = dyn["velocity"]
        if kind == "drift":
            velocity = _vector(velocity, "landscape.dynamics.velocity", p)
        schedule = _guard(
            "landscape.dynamics", DynamicsSchedule,
            kind=kind, velocity=tuple(velocity) if isinstance(velocity, list) else velocity,
            rate=_number(dyn["rate"], "landscape.dynamics.rate"),
            event_time=_number(dyn["event_time"], "landscape.dynamics.event_time", integer=True),
            depth_factor=_number(dyn["depth_factor"], "landscape.dynamics.depth_factor"),
            new_wells=new_wells,
        )
        base = _guard("landscape", WellsLandscape, wells, lo, hi, schedule, genome.extrinsic_mask)
    else:
        if kind != "static":
            raise ConfigError("landscape.dynamics.kind", f"dynamics need a wells landscape, got id {lid!r}")
        if lid == "paraboloid":
            center = (lo + hi) / 2 if ls["center"] is None else _vector(ls["center"], "landscape.center", p)
            base = _guard("landscape", Paraboloid, center, lo, hi)
        elif lid == "sphere":
            base = _guard("landscape", Paraboloid, np.zeros(p), lo, hi)
        elif lid == "coupled_quadratic":
            base = _guard("landscape", CoupledQuadratic, lo, hi)
        elif lid == "biobjective":
            base = _guard("landscape", BiObjective, lo, hi)
        else:
            raise ConfigError("landscape.id", f"unknown landscape {lid!r}; have {LANDSCAPE_IDS}")
        if ls["wells"] is not None or ls["preset"] is not None:
            raise ConfigError("landscape.wells", f"wells only apply to id 'wells', not {lid!r}")
    if lid != "paraboloid" and ls["center"] is not None:
        raise ConfigError("landscape.center", "center only applies to id 'paraboloid'")
    nz = ls["noise"]
    noise = _guard("landscape.noise", NoiseConfig,
                   _number(nz["amplitude"], "landscape.noise.amplitude"),
                   _number(nz["wavelength"], "landscape.noise.wavelength"), nz["mode"])
    if noise.amplitude > 0 or noise.mode != "phase":
        if base.k != 1:
            raise ConfigError("landscape.noise", "noise applies to single-objective landscapes")
        return NoisyLandscape(base, noise, seed)
    return base


def parse(doc) -> Experiment:
    d = _merge(DEFAULTS, doc, "")
    d["seed"] = _number(d["seed"], "seed", integer=True)
    if not 0 <= d["seed"] < 2 ** 64:
        raise ConfigError("seed", "must be a 64-bit unsigned integer")
    run = d["run"]
    run["N"] = _number(run["N"], "run.N", integer=True)
    run["G"] = _number(run["G"], "run.G", integer=True)
    if run["N"] < 2:
        raise ConfigError("run.N", "must be >= 2")
    if run["G"] < 0:
        raise ConfigError("run.G", "must be >= 0")
    stop = run["stop"]
    stop["target_cost"] = _number(stop["target_cost"], "run.stop.target_cost", allow_none=True)
    stop["stagnation_window"] = _number(stop["stagnation_window"], "run.stop.stagnation_window",
                                        integer=True, allow_none=True)
    if stop["stagnation_window"] is not None and stop["stagnation_window"] < 1:
        raise ConfigError("run.stop.stagnation_window", "must be >= 1")

    g = d["genome"]
    if not isinstance(g["params"], list) or not g["params"]:
        raise ConfigError("genome.params", "expected a non-empty list")
    params = []
    for i, raw in enumerate(g["params"]):
        key = f"genome.params[{i}]"
        q = _merge(PARAM_DEFAULTS, raw, key)
        for req in ("name", "lo", "hi"):
            if q[req] is None:
                raise ConfigError(f"{key}.{req}", "missing")
        if not isinstance(q["name"], str):
            raise ConfigError(f"{key}.name", "expected a string")
        params.append(_guard(key, ParamSpec, q["name"], _number(q["lo"], f"{key}.lo"), _number(q["hi"], f"{key}.hi"),
                             _number(q["bits"], f"{key}.bits", integer=True), q["kind"]))
        g["params"][i] = q
    genome = _guard("genome", GenomeSpec, tuple(params), g["coding"])

    o = d["operators"]
    operators = _guard(
        "operators", OperatorConfig,
        _number(o["crossover_prob"], "operators.crossover_prob"),
        _number(o["mutations_per_generation"], "operators.mutations_per_generation"),
        _number(o["tournament_win_prob"], "operators.tournament_win_prob"),
        _number(o["elite_count"], "operators.elite_count", integer=True),
    )
    if operators.elite_count >= run["N"]:
        raise ConfigError("operators.elite_count", "must be below run.N")
    s = d["sharing"]
    if not isinstance(s["enabled"], bool):
        raise ConfigError("sharing.enabled", "expected true or false")
    sharing = _guard("sharing", SharingConfig, s["enabled"], _number(s["sigma"], "sharing.sigma"),
                     _number(s["alpha"], "sharing.alpha"), _number(s["beta"], "sharing.beta"))
    b = d["blockopt"]
    b["N"] = _number(b["N"], "blockopt.N", integer=True)
    b["G"] = _number(b["G"], "blockopt.G", integer=True)
    b["tolerance"] = _number(b["tolerance"], "blockopt.tolerance")
    b["max_cycles"] = _number(b["max_cycles"], "blockopt.max_cycles", integer=True)
    if b["N"] < 2 or b["G"] < 0:
        raise ConfigError("blockopt", "need N >= 2 and G >= 0")

    land = _build_landscape(d["landscape"], genome, d["seed"])
    native_k = land.k
    obj = d["objectives"]
    weights = None
    if obj["weights"] is not None:
        weights = np.array(_vector(obj["weights"], "objectives.weights", native_k))
        _guard("objectives.weights", check_weights, weights, native_k)
    if obj["k"] is not None:
        k = _number(obj["k"], "objectives.k", integer=True)
        if k != native_k:
            raise ConfigError("objectives.k", f"landscape {d['landscape']['id']!r} has {native_k} objective(s), not {k}")
    exp = Experiment(d, genome, operators, sharing, b, native_k, weights)
    _guard("run", exp.run_config)
    return exp


def _no_duplicates(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise ConfigError(k, "duplicate key")
        out[k] = v
    return out


def _no_constants(name):
    raise ConfigError("<file>", f"non-standard JSON constant {name}")


def load(path) -> Experiment:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh, object_pairs_hook=_no_duplicates, parse_constant=_no_constants)
    except json.JSONDecodeError as exc:
        raise ConfigError("<file>", f"invalid JSON: {exc}") from None
    except OSError as exc:
        raise ConfigError("<file>", f"cannot read {path}: {exc.strerror}") from None
    return parse(doc)
