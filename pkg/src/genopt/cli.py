"""Command-line driver: ``genopt {run,compare,front,blockopt}``.

Exit status: 0 success, 1 configuration error, 2 runtime error.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
import time

import numpy as np

from genopt import kernels
from genopt.blockopt import block_optimize, parse_blocks
from genopt.config import ConfigError, Experiment, load
from genopt.engine import derive_rng, run, snapshot_generations
from genopt.errors import DomainError, GenoptError
from genopt.localsearch import PatternConfig, pattern_search
from genopt.multiobjective import run_front
from genopt.output import csv_text, front_svg, population_svg, trace_csv, write_atomic

log = logging.getLogger("genopt")

BASIN_RADIUS = 1.0
TAG_PS_START = 21
TAG_PS_NOISE = 22


def _out(path, name):
    os.makedirs(path, exist_ok=True)
    return os.path.join(path, name)


def _single_objective(exp: Experiment, command: str):
    if exp.k != 1:
        raise ConfigError("objectives.weights", f"{command} needs one objective; give weights to scalarize")


def cmd_run(exp: Experiment, out: str, seed=None):
    _single_objective(exp, "run")
    cfg = exp.run_config(seed)
    t0 = time.perf_counter()
    trace = run(cfg, snapshots=snapshot_generations(cfg.G))
    wall = time.perf_counter() - t0
    write_atomic(_out(out, "trace.csv"), trace_csv(trace, cfg.genome.p))
    best_row = min(trace.rows, key=lambda r: r.best_cost)
    summary = {
        "config": exp.doc | {"seed": cfg.seed},
        "final_best": {"cost": trace.best.best_cost, "x": list(trace.best.best_x),
                       "generation": trace.best.generation},
        "overall_best": {"cost": best_row.best_cost, "x": list(best_row.best_x),
                         "generation": best_row.generation},
        "total_evaluations": trace.best.evaluations,
        "generations": trace.best.generation,
        "wall_time_s": wall,
        "kernel_backend": kernels.backend(),
    }
    write_atomic(_out(out, "summary.json"), json.dumps(summary, indent=2, sort_keys=True) + "\n")
    if cfg.genome.p == 2:
        centers = cfg.landscape.niche_centers(trace.best.generation)
        write_atomic(_out(out, "population.svg"),
                     population_svg(trace.snapshots, cfg.genome.lo, cfg.genome.hi, centers))
    else:
        print(f"population.svg skipped: plot needs 2 parameters, genome has {cfg.genome.p}", file=sys.stderr)
    return trace


def compare_rows(exp: Experiment, starts: int, seed=None, pattern: PatternConfig = PatternConfig()):
    """Paired GA / pattern-search trials; returns (rows, ga_rate, ps_rate)."""
    _single_objective(exp, "compare")
    base = exp.seed if seed is None else seed
    rows = []
    for i in range(starts):
        s = base + i
        cfg = exp.run_config(s)
        land = cfg.landscape
        trace = run(cfg)
        t_end = trace.best.generation
        center = land.global_center(t_end)
        if center is None:
            raise ConfigError("landscape.id", "compare needs a landscape with a known global optimum")
        ga_x = np.array(trace.best.best_x)
        rng = derive_rng(s, 0, TAG_PS_START)
        x0 = cfg.genome.lo + rng.random(cfg.genome.p) * cfg.genome.span
        ps = pattern_search(land, x0, pattern, t=t_end, rng=derive_rng(s, 0, TAG_PS_NOISE))
        rows.append([
            s,
            trace.best.best_cost,
            int(np.linalg.norm(ga_x - center) <= BASIN_RADIUS),
            ps.cost,
            int(np.linalg.norm(ps.x - center) <= BASIN_RADIUS),
        ])
    ga_rate = float(np.mean([r[2] for r in rows])) if rows else math.nan
    ps_rate = float(np.mean([r[4] for r in rows])) if rows else math.nan
    return rows, ga_rate, ps_rate


COMPARE_HEADER = ["seed", "ga_best", "ga_in_global_basin", "ps_best", "ps_in_global_basin"]


def cmd_compare(exp: Experiment, starts: int, out: str, seed=None):
    if starts < 0:
        raise ConfigError("--starts", "must be >= 0")
    rows, ga_rate, ps_rate = compare_rows(exp, starts, seed)
    footer = ["success_rate", "", ga_rate, "", ps_rate]
    write_atomic(_out(out, "compare.csv"), csv_text(COMPARE_HEADER, rows + [footer]))
    return rows, ga_rate, ps_rate


def cmd_front(exp: Experiment, out: str, seed=None):
    if exp.native_k < 2:
        raise ConfigError("objectives.k", "front needs at least two objectives")
    cfg = exp.run_config(seed, scalarize=False)
    result = run_front(cfg)
    arc = result.archive
    x = cfg.genome.decode(arc.bits)
    order = np.lexsort(arc.costs.T[::-1])
    header = [f"x_{j}" for j in range(cfg.genome.p)] + [f"f_{i}" for i in range(arc.costs.shape[1])]
    rows = [[*x[i], *arc.costs[i]] for i in order]
    write_atomic(_out(out, "front.csv"), csv_text(header, rows))
    if arc.costs.shape[1] == 2:
        write_atomic(_out(out, "front.svg"), front_svg(arc.costs[order]))
    return result


def cmd_blockopt(exp: Experiment, blocks, out: str, seed=None):
    _single_objective(exp, "blockopt")
    partition = exp.partition(blocks)
    cfg = exp.run_config(seed)
    result = block_optimize(cfg, partition)
    rows = [[h.cycle, h.block, h.incumbent_cost] for h in result.history]
    write_atomic(_out(out, "blocks.csv"), csv_text(["cycle", "block_index", "incumbent_cost"], rows))
    return result


def build_parser():
    ap = argparse.ArgumentParser(prog="genopt", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name, help_ in [("run", "run the GA and write trace.csv, summary.json, population.svg"),
                        ("compare", "paired GA vs pattern-search trials -> compare.csv"),
                        ("front", "Pareto run -> front.csv, front.svg"),
                        ("blockopt", "block-coordinate GA -> blocks.csv")]:
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", required=True, metavar="PATH")
        p.add_argument("--out", required=True, metavar="DIR")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        if name == "compare":
            p.add_argument("--starts", type=int, default=100, metavar="M")
        if name == "blockopt":
            p.add_argument("--blocks", default=None, metavar="SPEC", help='index groups, e.g. "0,1|2,3"')
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        exp = load(args.config)
        if args.seed is not None and not 0 <= args.seed < 2 ** 64:
            raise ConfigError("--seed", "must be a 64-bit unsigned integer")
        blocks = None
        if args.command == "blockopt" and args.blocks is not None:
            try:
                blocks = parse_blocks(args.blocks)
            except DomainError as exc:
                raise ConfigError("--blocks", str(exc)) from None
        if args.command == "run":
            cmd_run(exp, args.out, args.seed)
        elif args.command == "compare":
            cmd_compare(exp, args.starts, args.out, args.seed)
        elif args.command == "front":
            cmd_front(exp, args.out, args.seed)
        else:
            cmd_blockopt(exp, blocks, args.out, args.seed)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (GenoptError, OSError, ValueError, FloatingPointError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
