"""Random graph families for max-k-cover instances."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import InputError
from .objectives.coverage import CoverInstance
from .objectives.graph import Graph

DEFAULT_INITIATOR = ((0.9, 0.5), (0.5, 0.1))


def gen_er(n: int, p: float, rng: np.random.Generator) -> Graph:
    """Each unordered pair becomes an edge independently with probability ``p``."""
    if not 0 <= p <= 1:
        raise InputError(f"edge probability {p} outside [0, 1]")
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(len(iu)) < p
    return Graph(n, np.column_stack([iu[keep], ju[keep]]))


def gen_ba(n: int, d: int, rng: np.random.Generator) -> Graph:
    """Preferential attachment on top of a complete core of ``d + 1`` nodes.

    Each new node draws ``d`` distinct targets with probability proportional
    to current degree; repeated draws are rejected.
    """
    if not 1 <= d < n:
        raise InputError(f"need 1 <= d < n, got d={d}, n={n}")
    edges = [(i, j) for i in range(d + 1) for j in range(i + 1, d + 1)]
    deg = np.zeros(n)
    deg[: d + 1] = d
    for t in range(d + 1, n):
        weights = deg[:t] / deg[:t].sum()
        chosen: list[int] = []
        while len(chosen) < d:
            u = int(rng.choice(t, p=weights))
            if u not in chosen:
                chosen.append(u)
        for u in chosen:
            edges.append((u, t))
            deg[u] += 1
        deg[t] = d
    return Graph(n, np.array(edges, dtype=np.int64).reshape(-1, 2))


def kronecker_probabilities(initiator, power: int) -> np.ndarray:
    P0 = np.asarray(initiator, dtype=float)
    if P0.ndim != 2 or P0.shape[0] != P0.shape[1]:
        raise InputError("initiator must be a square matrix")
    if np.any((P0 < 0) | (P0 > 1)):
        raise InputError("initiator entries must lie in [0, 1]")
    if power < 1:
        raise InputError("Kronecker power must be at least 1")
    P = P0
    for _ in range(power - 1):
        P = np.kron(P, P0)
    return P


def gen_kronecker(initiator, power: int, rng: np.random.Generator) -> Graph:
    """Stochastic Kronecker graph, undirected: pair ``i < j`` kept with ``P[i, j]``."""
    P = kronecker_probabilities(initiator, power)
    n = P.shape[0]
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(len(iu)) < P[iu, ju]
    return Graph(n, np.column_stack([iu[keep], ju[keep]]))


def round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


@dataclass
class GeneratorSpec:
    family: str
    n: int = 64
    k: int = 20
    seed: int = 0
    p: float = 0.1
    d: int = 5
    initiator: tuple = DEFAULT_INITIATOR
    power: int = 6
    hard: bool = False

    def __post_init__(self):
        if self.family not in ("er", "ba", "kronecker"):
            raise InputError(f"unknown graph family {self.family!r}")
        if self.family == "kronecker":
            dim = len(self.initiator)
            if self.power < 1:
                raise InputError("Kronecker power must be at least 1")
            self.n = dim**self.power
        if self.hard and self.family == "kronecker":
            raise InputError("per-color schedules exist only for er and ba")


def gen_hard_schedule(family: str, k: int, base_params: dict | None = None) -> list[dict]:
    """Per-color parameters for colors ``c = 1..k``.

    ER uses ``p_c = 0.1 + c/50``; BA uses ``d_c = round(5 + c/2)`` with halves
    rounded up.
    """
    base = dict(base_params or {})
    out = []
    for c in range(1, k + 1):
        if family == "er":
            out.append({**base, "p": 0.1 + c / 50})
        elif family == "ba":
            out.append({**base, "d": round_half_up(5 + c / 2)})
        else:
            raise InputError(f"no per-color schedule for {family!r}")
    return out


def color_seeds(seed: int, k: int) -> list[np.random.Generator]:
    """Independent generator per color from one master seed."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(k)]


def generate_graphs(spec: GeneratorSpec) -> list[Graph]:
    rngs = color_seeds(spec.seed, spec.k)
    if spec.hard:
        params = gen_hard_schedule(spec.family, spec.k)
    else:
        params = [{}] * spec.k
    graphs = []
    for rng, extra in zip(rngs, params):
        if spec.family == "er":
            graphs.append(gen_er(spec.n, extra.get("p", spec.p), rng))
        elif spec.family == "ba":
            graphs.append(gen_ba(spec.n, extra.get("d", spec.d), rng))
        else:
            graphs.append(gen_kronecker(spec.initiator, spec.power, rng))
    return graphs


def cover_instance(spec: GeneratorSpec, name: str | None = None) -> CoverInstance:
    if name is None:
        tag = "hard-" if spec.hard else ""
        name = f"{tag}{spec.family}-n{spec.n}-k{spec.k}-s{spec.seed}"
    return CoverInstance(generate_graphs(spec), name)
