"""Simple graphs and the edge-list / color / probability file formats."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from ..core import InstanceError


@dataclass
class Graph:
    """Simple graph on nodes ``0..n-1``.

    Undirected edges are stored once with ``u < v``; duplicates and
    self-loops are dropped on construction.
    """

    n: int
    edges: np.ndarray
    directed: bool = False
    _csr: sp.csr_matrix | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        e = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if len(e) and (e.min() < 0 or e.max() >= self.n):
            raise InstanceError("edge endpoint outside the node range")
        e = e[e[:, 0] != e[:, 1]]
        if not self.directed:
            e = np.sort(e, axis=1)
        e = np.unique(e, axis=0) if len(e) else e
        self.edges = e

    @property
    def m(self) -> int:
        return len(self.edges)

    def adjacency(self) -> sp.csr_matrix:
        """Forward adjacency (symmetric for undirected graphs)."""
        if self._csr is None:
            u, v = self.edges[:, 0], self.edges[:, 1]
            if not self.directed:
                u, v = np.concatenate([u, v]), np.concatenate([v, u])
            data = np.ones(len(u), dtype=np.int8)
            self._csr = sp.csr_matrix((data, (u, v)), shape=(self.n, self.n))
        return self._csr

    def reverse(self) -> sp.csr_matrix:
        return self.adjacency().T.tocsr()

    def degrees(self) -> np.ndarray:
        """Total degree (in + out for directed graphs)."""
        return np.bincount(self.edges.ravel(), minlength=self.n)

    def in_neighbors(self, v: int) -> np.ndarray:
        if self.directed:
            return self.edges[self.edges[:, 1] == v, 0]
        a = self.adjacency()
        return a.indices[a.indptr[v]:a.indptr[v + 1]]

    def edge_set(self) -> set[tuple[int, int]]:
        return {(int(a), int(b)) for a, b in self.edges}


def _data_lines(path):
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if line and not line.startswith("#"):
                yield lineno, line.split()


def read_edge_list(path, directed: bool = False, mapping: dict | None = None):
    """Parse ``u v`` lines; returns the graph and the label -> index map.

    Node labels get dense indices in order of first appearance unless a
    mapping is supplied.
    """
    mapping = {} if mapping is None else dict(mapping)
    pairs = []
    for lineno, tok in _data_lines(path):
        if len(tok) < 2:
            raise InstanceError(f"{path}:{lineno}: expected 'u v'")
        ids = []
        for label in tok[:2]:
            if label not in mapping:
                mapping[label] = len(mapping)
            ids.append(mapping[label])
        pairs.append(ids)
    if not mapping:
        raise InstanceError(f"{path}: no edges")
    return Graph(len(mapping), np.array(pairs, dtype=np.int64).reshape(-1, 2), directed), mapping


def write_edge_list(graph: Graph, path, labels=None) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# n={graph.n} m={graph.m} directed={int(graph.directed)}\n")
        for u, v in graph.edges:
            a, b = (u, v) if labels is None else (labels[u], labels[v])
            fh.write(f"{a} {b}\n")


def write_mapping(mapping: dict, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for label, idx in sorted(mapping.items(), key=lambda kv: kv[1]):
            fh.write(f"{label} {idx}\n")


def read_colors(path, mapping: dict, n: int):
    """``node color`` lines -> (color index per node, color labels)."""
    labels: dict[str, int] = {}
    colors = np.full(n, -1, dtype=np.int64)
    for lineno, tok in _data_lines(path):
        if len(tok) < 2:
            raise InstanceError(f"{path}:{lineno}: expected 'node color'")
        node, lab = tok[0], tok[1]
        if node not in mapping:
            # isolated nodes may only appear in the color file
            mapping[node] = len(mapping)
            colors = np.append(colors, -1)
        if lab not in labels:
            labels[lab] = len(labels)
        colors[mapping[node]] = labels[lab]
    if np.any(colors < 0):
        missing = [lab for lab, i in mapping.items() if colors[i] < 0][:5]
        raise InstanceError(f"{path}: no color for nodes {missing}")
    return colors, list(labels)


def read_probabilities(path, mapping: dict, graph: Graph) -> np.ndarray:
    """``u v p`` lines -> per-edge probabilities aligned with ``graph.edges``."""
    index = {(int(a), int(b)): i for i, (a, b) in enumerate(graph.edges)}
    probs = np.full(graph.m, np.nan)
    for lineno, tok in _data_lines(path):
        if len(tok) < 3:
            raise InstanceError(f"{path}:{lineno}: expected 'u v p'")
        try:
            u, v, p = mapping[tok[0]], mapping[tok[1]], float(tok[2])
        except (KeyError, ValueError) as exc:
            raise InstanceError(f"{path}:{lineno}: {exc}") from exc
        if not graph.directed and u > v:
            u, v = v, u
        if (u, v) not in index:
            raise InstanceError(f"{path}:{lineno}: edge not in graph")
        if not 0 <= p <= 1:
            raise InstanceError(f"{path}:{lineno}: probability {p} outside [0, 1]")
        probs[index[(u, v)]] = p
    if np.any(np.isnan(probs)):
        raise InstanceError(f"{path}: probabilities missing for some edges")
    return probs


def load_colored_graph(edge_path, color_path, directed: bool = False):
    """Edge list plus node colors; returns ``(graph, colors, mapping)``.

    Nodes listed only in the color file become isolated nodes.
    """
    graph, mapping = read_edge_list(edge_path, directed)
    colors, _ = read_colors(color_path, mapping, graph.n)
    if len(mapping) != graph.n:
        graph = Graph(len(mapping), graph.edges, directed)
    return graph, colors, mapping
