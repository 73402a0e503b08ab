"""Binary-coded genetic optimization: operators, a generational engine,
dynamic and noisy test landscapes, fitness sharing, Pareto ranking,
a compass-search baseline and block-coordinate search.
"""
from genopt.engine import RunConfig, RunTrace, init_population, run, step
from genopt.genome import GenomeSpec, ParamSpec, Schema, decode, encode, schema_count
from genopt.kernels import backend
from genopt.operators import OperatorConfig, crossover, eliminate_to_size, mutate, pick_parent
from genopt.population import Individual, Population

__version__ = "0.1.0"

__all__ = [
    "GenomeSpec", "ParamSpec", "Schema", "decode", "encode", "schema_count",
    "OperatorConfig", "crossover", "mutate", "pick_parent", "eliminate_to_size",
    "Individual", "Population", "RunConfig", "RunTrace", "init_population", "step", "run",
    "backend",
]
