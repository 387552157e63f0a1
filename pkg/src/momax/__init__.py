"""Multiobjective monotone submodular maximization under a cardinality constraint.

The main entry point is :func:`momax.algorithms.lp_greedy`, a greedy
algorithm that picks each element by sampling from the solution of a small
max-min linear program over the colors.
"""

from .algorithms import (
    LPGreedyConfig,
    RunResult,
    binary_search_opt,
    greedy_minimum,
    greedy_round_robin,
    lazy_greedy_single,
    lp_greedy,
    lp_greedy_full_pipeline,
    preprocess,
    saturate,
    udwani_mwu,
)
from .core import (
    ElementSet,
    MultiObjectiveInstance,
    SubmodularOracle,
    brute_force_opt,
    min_value,
)

__version__ = "0.1.0"

__all__ = [
    "ElementSet",
    "LPGreedyConfig",
    "MultiObjectiveInstance",
    "RunResult",
    "SubmodularOracle",
    "binary_search_opt",
    "brute_force_opt",
    "greedy_minimum",
    "greedy_round_robin",
    "lazy_greedy_single",
    "lp_greedy",
    "lp_greedy_full_pipeline",
    "min_value",
    "preprocess",
    "saturate",
    "udwani_mwu",
]
