"""Fair influence maximization under the independent cascade model.

A fixed set of live-edge samples is drawn once; the influence of ``S`` is the
average (over samples) number of color-``c`` nodes reachable from ``S``,
divided by ``|V_c|``.  Over fixed samples this is a normalized coverage
function, hence monotone and submodular.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from ..core import InstanceError, MultiObjectiveInstance, SubmodularOracle
from .graph import Graph


def _arcs(graph: Graph, edge_prob):
    probs = np.broadcast_to(np.asarray(edge_prob, dtype=float), (graph.m,)).copy()
    if np.any((probs < 0) | (probs > 1)):
        raise InstanceError("edge probabilities must lie in [0, 1]")
    a, b = graph.edges[:, 0], graph.edges[:, 1]
    if graph.directed:
        return a, b, probs
    return np.concatenate([a, b]), np.concatenate([b, a]), np.concatenate([probs, probs])


def reachability(n: int, m: int, src: np.ndarray, dst: np.ndarray) -> sp.csr_matrix:
    """``R[v, s*n + w] = 1`` iff ``w`` is reachable from ``v`` in sample ``s``.

    ``src``/``dst`` are live arcs already offset into the disjoint union of
    the ``m`` sample graphs.  Frontier BFS from all seeds at once.
    """
    N = n * m
    adj = sp.csr_matrix((np.ones(len(src), dtype=np.int32), (src, dst)), shape=(N, N))
    seeds = np.repeat(np.arange(n), m)
    cols = (np.tile(np.arange(m), n) * n + seeds)
    reach = sp.csr_matrix((np.ones(N, dtype=np.int32), (seeds, cols)), shape=(n, N))
    frontier = reach
    while frontier.nnz:
        step = (frontier @ adj).astype(bool).astype(np.int32)
        step = (step - step.multiply(reach)).tocsr()
        step.eliminate_zeros()
        reach = (reach + step).tocsr()
        frontier = step
    reach.data[:] = 1
    return reach


class CascadeModel(MultiObjectiveInstance):
    """Independent cascade over ``m`` fixed live-edge samples."""

    def __init__(self, graph: Graph, edge_prob, m: int = 1000, seed: int = 0, colors=None, name: str = "influence"):
        if m < 1:
            raise InstanceError("need at least one sample")
        n = graph.n
        colors = np.zeros(n, dtype=np.int64) if colors is None else np.asarray(colors, dtype=np.int64)
        if len(colors) != n:
            raise InstanceError("color map must cover every node")
        k = int(colors.max()) + 1
        self.color_sizes = np.bincount(colors, minlength=k)
        if np.any(self.color_sizes == 0):
            raise InstanceError(f"empty colors {np.flatnonzero(self.color_sizes == 0).tolist()}")
        self.graph = graph
        self.colors = colors
        self.m = int(m)
        self.seed = seed
        a, b, probs = _arcs(graph, edge_prob)
        rng = np.random.default_rng(seed)
        live = rng.random((self.m, len(a))) < probs[None, :]
        s_idx, arc_idx = np.nonzero(live)
        self.live_counts = live.sum(axis=1)
        self._live = (s_idx, a[arc_idx], b[arc_idx])
        self.reach = reachability(n, self.m, s_idx * n + a[arc_idx], s_idx * n + b[arc_idx])
        self.column_color = np.tile(colors, self.m)
        super().__init__([InfluenceOracle(self, c) for c in range(k)], name)

    def live_edges(self, s: int) -> list[tuple[int, int]]:
        """Arcs kept in sample ``s``."""
        keep = self._live[0] == s
        return list(zip(self._live[1][keep].tolist(), self._live[2][keep].tolist()))

    def reached(self, S, s: int) -> np.ndarray:
        """Nodes reachable from ``S`` in sample ``s``."""
        n = self.graph.n
        block = self.reach[list(S)][:, s * n:(s + 1) * n]
        return np.flatnonzero(np.asarray(block.sum(axis=0)).ravel() > 0)


class InfluenceOracle(SubmodularOracle):
    def __init__(self, model: CascadeModel, c: int):
        super().__init__(model.graph.n)
        self.model = model
        self.c = c
        self.mask = (model.column_color == c).astype(np.float64)
        self.norm = float(model.m * model.color_sizes[c])

    def _state(self, members):
        if members:
            covered = np.asarray(self.model.reach[sorted(members)].sum(axis=0)).ravel() > 0
        else:
            covered = np.zeros(self.model.reach.shape[1], dtype=bool)
        open_cols = self.mask * ~covered
        return int(self.mask[covered].sum()), open_cols

    def _state_value(self, state):
        return state[0] / self.norm

    def _state_augmented(self, state, candidates):
        count, open_cols = state
        new = self.model.reach[candidates] @ open_cols
        return (count + new) / self.norm


def build_cascade_model(graph: Graph, edge_prob, m: int = 1000, seed: int = 0, colors=None, name: str = "influence") -> CascadeModel:
    return CascadeModel(graph, edge_prob, m, seed, colors, name)


def influence_value(model: CascadeModel, c: int, S) -> float:
    return model.oracles[c].value(S)
