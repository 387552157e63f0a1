"""Multi-graph edge coverage: ``f_c(U)`` counts edges of ``G_c`` touching ``U``."""

from __future__ import annotations

import numpy as np

from ..core import InstanceError, MultiObjectiveInstance, SubmodularOracle
from .graph import Graph


class CoverOracle(SubmodularOracle):
    def __init__(self, graph: Graph):
        super().__init__(graph.n)
        self.graph = graph
        self._u = graph.edges[:, 0]
        self._v = graph.edges[:, 1]

    def _state(self, members):
        inside = np.zeros(self.n, dtype=bool)
        inside[list(members)] = True
        covered = inside[self._u] | inside[self._v]
        # uncovered edges incident to each node
        free = np.bincount(self._u[~covered], minlength=self.n) + np.bincount(self._v[~covered], minlength=self.n)
        return int(covered.sum()), free

    def _state_value(self, state):
        return float(state[0])

    def _state_augmented(self, state, candidates):
        count, free = state
        return (count + free[candidates]).astype(float)


class CoverInstance(MultiObjectiveInstance):
    """One undirected graph per color on a shared node set."""

    def __init__(self, graphs: list[Graph], name: str = "cover"):
        if not graphs:
            raise InstanceError("need at least one graph")
        if any(g.n != graphs[0].n for g in graphs):
            raise InstanceError("all cover graphs must share the node set")
        self.graphs = graphs
        super().__init__([CoverOracle(g) for g in graphs], name)


def cover_value(inst: CoverInstance, c: int, U) -> float:
    return inst.oracles[c].value(U)


def uncovered_edges(graph: Graph, U) -> int:
    inside = np.zeros(graph.n, dtype=bool)
    inside[list(U)] = True
    return int((~(inside[graph.edges[:, 0]] | inside[graph.edges[:, 1]])).sum())
