"""Benchmark harness for evolutionary algorithms."""

import json

from ._evobench import (
    ContractViolation,
    EvaluationError,
    IncompatibleArity,
    IoError,
    UnknownId,
    algorithms,
    crowding_distance,
    default_config,
    diversity,
    evaluate,
    hypervolume,
    igd,
    non_dominated_sort,
    pareto_front,
    problem_info,
    problems,
)
from . import _evobench

__all__ = [
    "ContractViolation",
    "EvaluationError",
    "IncompatibleArity",
    "IoError",
    "UnknownId",
    "algorithms",
    "crowding_distance",
    "default_config",
    "diversity",
    "evaluate",
    "hypervolume",
    "igd",
    "non_dominated_sort",
    "pareto_front",
    "problem_info",
    "problems",
    "run",
    "to_csv",
    "to_svg",
]


def run(algo, problem, *, dim=0, n_obj=0, pop=100, budget="gen:100", reps=15, backend="serial", workers=1,
        seed=1, overrides=None, record_diversity=True):
    """Runs repeated experiments and returns the record as a dict."""
    text = _evobench.run_json(algo, problem, dim, n_obj, pop, budget, reps, backend, workers, seed,
                              {k: str(v) for k, v in (overrides or {}).items()}, record_diversity)
    return json.loads(text)


def to_svg(record, kind="convergence"):
    """SVG plot of a run or sweep record."""
    return _evobench.render_svg_json(json.dumps(record), kind)


def to_csv(record):
    """Flat CSV table of a run record."""
    return _evobench.csv_json(json.dumps(record))
