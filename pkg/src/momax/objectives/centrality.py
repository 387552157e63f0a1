"""Fair harmonic centrality of a target node under inserted in-edges.

Elements are candidate sources ``u`` (no existing edge ``u -> target``).
Inserting ``u -> target`` shortens ``d(w, target)`` to at most
``d(w, u) + 1``.  Every inserted edge ends at the target, so a shortest path
uses at most one of them and only as its last hop; the new distance is the
minimum of the old one and ``d(w, u) + 1`` over inserted ``u``.
"""

from __future__ import annotations

import numpy as np
from scipy.sparse.csgraph import shortest_path

from ..core import InputError, InstanceError, MultiObjectiveInstance, SubmodularOracle
from .graph import Graph

UNREACHABLE = np.iinfo(np.int32).max


def reverse_bfs(graph: Graph, sources) -> np.ndarray:
    """``d(w, s)`` for each source ``s`` (rows) and node ``w`` (columns); inf if unreachable."""
    sources = np.atleast_1d(np.asarray(sources, dtype=np.int64))
    if len(sources) == 0:
        return np.zeros((0, graph.n))
    return shortest_path(graph.reverse(), directed=True, unweighted=True, indices=sources).reshape(len(sources), graph.n)


def pick_median_degree_target(graph: Graph) -> int:
    """Lowest-index node whose total degree equals the lower median degree."""
    deg = graph.degrees()
    med = np.sort(deg)[(graph.n - 1) // 2]
    return int(np.flatnonzero(deg == med)[0])


class CentralityInstance(MultiObjectiveInstance):
    """Fair harmonic centrality instance; element ``i`` is ``candidates[i]``.

    Distances are held as ``int32`` with a sentinel for unreachable nodes.
    """

    def __init__(self, graph: Graph, colors, target: int, name: str = "centrality"):
        if not graph.directed:
            raise InstanceError("fair centrality needs a directed graph")
        colors = np.asarray(colors, dtype=np.int64)
        if len(colors) != graph.n:
            raise InstanceError("color map must cover every node")
        if not 0 <= target < graph.n:
            raise InputError(f"target {target} not in graph")
        self.graph = graph
        self.colors = colors
        self.target = int(target)
        k = int(colors.max()) + 1
        others = np.ones(graph.n, dtype=bool)
        others[target] = False
        self.color_sizes = np.bincount(colors[others], minlength=k)
        if np.any(self.color_sizes == 0):
            bad = np.flatnonzero(self.color_sizes == 0).tolist()
            raise InstanceError(f"colors {bad} have no member besides the target")
        excluded = np.zeros(graph.n, dtype=bool)
        excluded[target] = True
        excluded[graph.in_neighbors(target)] = True
        self.candidates = np.flatnonzero(~excluded)
        if len(self.candidates) == 0:
            raise InstanceError("target already has an in-edge from every node")
        self.base_dist = _compact(reverse_bfs(graph, [target])[0])
        self.cand_dist = _compact(reverse_bfs(graph, self.candidates))
        # weight[w, c] = 1/|V_c \ {target}| if w has color c and is not the target
        self.weights = np.zeros((graph.n, k))
        self.weights[np.flatnonzero(others), colors[others]] = 1.0 / self.color_sizes[colors[others]]
        super().__init__([HarmonicOracle(self, c) for c in range(k)], name)

    def new_distances(self, F) -> np.ndarray:
        """Distances to the target after inserting ``u -> target`` for ``u`` in ``F``."""
        best = self.base_dist.astype(np.int64)
        for i in F:
            np.minimum(best, self.cand_dist[i].astype(np.int64) + 1, out=best)
        return best


def _compact(d: np.ndarray) -> np.ndarray:
    out = np.where(np.isinf(d), UNREACHABLE - 1, d)
    return out.astype(np.int32)


def _harmonic(dist: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        inv = 1.0 / dist
    inv[dist >= UNREACHABLE - 1] = 0.0
    inv[dist == 0] = 0.0
    return inv


class HarmonicOracle(SubmodularOracle):
    """Color-``c`` normalized harmonic centrality of the target."""

    def __init__(self, inst: CentralityInstance, c: int):
        super().__init__(len(inst.candidates))
        self.inst = inst
        self.c = c
        self.w = inst.weights[:, c]
        self.rows = np.flatnonzero(self.w > 0)
        self._cand = inst.cand_dist[:, self.rows] + np.int32(1)

    def _state(self, members):
        best = self.inst.new_distances(members)[self.rows]
        return best, float(_harmonic(best) @ self.w[self.rows])

    def _state_value(self, state):
        return state[1]

    def _state_augmented(self, state, candidates):
        best, _ = state
        aug = np.minimum(best[None, :], self._cand[candidates])
        return _harmonic(aug) @ self.w[self.rows]


def build_centrality_instance(graph: Graph, color_map, target: int, name: str = "centrality") -> CentralityInstance:
    return CentralityInstance(graph, color_map, target, name)


def fair_harmonic_value(inst: CentralityInstance, c: int, F) -> float:
    """Value for color ``c`` after inserting edges from candidate *nodes* ``F``."""
    pos = {int(u): i for i, u in enumerate(inst.candidates)}
    try:
        idx = [pos[int(u)] for u in F]
    except KeyError as exc:
        raise InputError(f"node {exc.args[0]} is not a candidate source") from None
    return inst.oracles[c].value(idx)
