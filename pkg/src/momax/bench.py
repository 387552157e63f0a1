"""Benchmark harness: budget sweeps, ablations, CSV output and summaries."""

from __future__ import annotations

import csv
import json
import math
import os
import time
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Callable, Iterable

import numpy as np
import yaml

from .algorithms import (
    LPGreedyConfig,
    RunResult,
    binary_search_opt,
    greedy_minimum,
    greedy_round_robin,
    greedy_sum,
    lp_greedy,
    lp_greedy_full_pipeline,
)
from .core import InstanceError, MultiObjectiveInstance, TimeLimitExceeded
from .generators import DEFAULT_INITIATOR, GeneratorSpec, cover_instance, generate_graphs
from .objectives import (
    CascadeModel,
    CentralityInstance,
    CoverInstance,
    Graph,
    load_colored_graph,
    pick_median_degree_target,
    read_edge_list,
    read_probabilities,
)

HEADER = [
    "instance",
    "objective_family",
    "algorithm",
    "B",
    "seed",
    "objective",
    "argmin_color",
    "oracle_calls",
    "wall_time_s",
    "extra",
]
FAMILIES = ("cover", "centrality", "influence")


class ConfigError(ValueError):
    pass


class InstanceLoadError(RuntimeError):
    pass


@dataclass
class ExperimentConfig:
    """Flat key-value experiment description; see the README for every key."""

    objective: str = "cover"
    graph: str = "er"
    n: int = 64
    k: int = 20
    p: float = 0.1
    d: int = 5
    initiator: list = field(default_factory=lambda: [list(r) for r in DEFAULT_INITIATOR])
    power: int = 6
    hard: bool = False
    edge_files: list = field(default_factory=list)
    color_file: str | None = None
    prob_file: str | None = None
    directed: bool = False
    edge_prob: float = 0.1
    samples: int = 1000
    target: int | None = None
    name: str | None = None
    algorithms: list = field(default_factory=lambda: ["lp_greedy"])
    budgets: list = field(default_factory=lambda: [20])
    seeds: list = field(default_factory=lambda: [0])
    out: str = "results.csv"
    time_limit_s: float = 600.0
    repetitions: int = 20
    phi: float = 10.0
    backend: str = "exact"
    epsilon: float = 0.1
    delta: float = 0.1
    mwu_rounds: int | None = None
    per_color_budget: int | None = None
    rel_tol: float = 0.01
    udwani_iterations: int = 100

    def __post_init__(self):
        self.budgets = _int_list(self.budgets, "budgets")
        self.seeds = _int_list(self.seeds, "seeds")
        self.algorithms = _str_list(self.algorithms)
        if self.objective not in FAMILIES:
            raise ConfigError(f"objective must be one of {FAMILIES}, got {self.objective!r}")
        if not self.algorithms:
            raise ConfigError("at least one algorithm is required")
        unknown = [a for a in self.algorithms if a not in ALGORITHMS]
        if unknown:
            raise ConfigError(f"unknown algorithms {unknown}; choose from {sorted(ALGORITHMS)}")
        if not self.seeds:
            raise ConfigError("at least one seed is required")
        if not self.budgets or min(self.budgets) < 0:
            raise ConfigError("budgets must be a nonempty list of nonnegative integers")
        self.budgets = sorted(self.budgets)
        if self.time_limit_s <= 0:
            raise ConfigError("time_limit_s must be positive")
        if self.backend not in ("exact", "mwu"):
            raise ConfigError("backend must be 'exact' or 'mwu'")
        if isinstance(self.edge_files, str):
            self.edge_files = [self.edge_files]

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        extra = sorted(set(data) - known)
        if extra:
            raise ConfigError(f"unknown config keys {extra}")
        try:
            return cls(**data)
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(str(exc)) from None

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        try:
            with open(path, encoding="utf-8") as fh:
                data = yaml.safe_load(fh) or {}
        except (OSError, yaml.YAMLError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config must be a key-value mapping")
        return cls.from_dict(data)

    def replace(self, **changes) -> "ExperimentConfig":
        data = asdict(self)
        data.update({k: v for k, v in changes.items() if v is not None})
        return ExperimentConfig.from_dict(data)


def _int_list(value, what) -> list[int]:
    if isinstance(value, (int, np.integer)):
        return [int(value)]
    if isinstance(value, str):
        value = [v for v in value.replace(" ", "").split(",") if v]
    try:
        return [int(v) for v in value]
    except (TypeError, ValueError):
        raise ConfigError(f"{what} must be a list of integers") from None


def _str_list(value) -> list[str]:
    if isinstance(value, str):
        return [v.strip() for v in value.split(",") if v.strip()]
    return [str(v) for v in value]


@dataclass
class RecordRow:
    instance: str
    objective_family: str
    algorithm: str
    B: int
    seed: int
    objective: float
    argmin_color: int
    oracle_calls: int
    wall_time_s: float
    extra: dict = field(default_factory=dict)

    def key(self):
        return (self.algorithm, self.B, self.seed)

    def deterministic(self) -> tuple:
        """Everything except wall time."""
        d = asdict(self)
        d.pop("wall_time_s")
        return tuple((k, json.dumps(v, sort_keys=True)) for k, v in d.items())

    def to_csv(self) -> list[str]:
        return [
            self.instance,
            self.objective_family,
            self.algorithm,
            str(self.B),
            str(self.seed),
            repr(float(self.objective)),
            str(self.argmin_color),
            str(self.oracle_calls),
            repr(float(self.wall_time_s)),
            json.dumps(self.extra, sort_keys=True, separators=(",", ":")),
        ]

    @classmethod
    def from_csv(cls, rec: list[str]) -> "RecordRow":
        return cls(
            instance=rec[0],
            objective_family=rec[1],
            algorithm=rec[2],
            B=int(rec[3]),
            seed=int(rec[4]),
            objective=float(rec[5]),
            argmin_color=int(rec[6]),
            oracle_calls=int(rec[7]),
            wall_time_s=float(rec[8]),
            extra=json.loads(rec[9]) if rec[9] else {},
        )

    @property
    def timed_out(self) -> bool:
        return self.extra.get("status") == "timeout"


def write_csv(rows: Iterable[RecordRow], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(HEADER)
        for row in rows:
            w.writerow(row.to_csv())


def read_csv(path) -> list[RecordRow]:
    with open(path, encoding="utf-8", newline="") as fh:
        r = csv.reader(fh)
        header = next(r, None)
        if header != HEADER:
            raise ConfigError(f"{path}: unexpected header {header}")
        return [RecordRow.from_csv(rec) for rec in r if rec]


# -- instances -----------------------------------------------------------------


def _generator_spec(cfg: ExperimentConfig, seed: int, k: int | None = None) -> GeneratorSpec:
    return GeneratorSpec(
        family=cfg.graph,
        n=cfg.n,
        k=cfg.k if k is None else k,
        seed=seed,
        p=cfg.p,
        d=cfg.d,
        initiator=tuple(tuple(r) for r in cfg.initiator),
        power=cfg.power,
        hard=cfg.hard and k is None,
    )


def _random_colors(n: int, k: int, seed: int) -> np.ndarray:
    """Balanced random coloring; every color gets at least one node."""
    if k > n:
        raise InstanceError(f"cannot give {k} colors to {n} nodes")
    rng = np.random.default_rng([seed, 1])
    return rng.permutation(np.arange(n) % k)


def _single_graph(cfg: ExperimentConfig, seed: int, directed: bool):
    """One graph plus node colors, from files or from the generator."""
    if cfg.edge_files:
        if cfg.color_file is None:
            raise InstanceLoadError("color_file is required with edge_files for this objective")
        graph, colors, mapping = load_colored_graph(cfg.edge_files[0], cfg.color_file, directed)
        return graph, colors, mapping
    base = generate_graphs(_generator_spec(cfg, seed, k=1))[0]
    if directed:
        e = base.edges
        base = Graph(base.n, np.vstack([e, e[:, ::-1]]), directed=True)
    return base, _random_colors(base.n, cfg.k, seed), None


def build_instance(cfg: ExperimentConfig, seed: int) -> MultiObjectiveInstance:
    """Instance for one seed; file-based instances ignore the seed."""
    try:
        if cfg.objective == "cover":
            if cfg.edge_files:
                mapping: dict = {}
                loaded = []
                for path in cfg.edge_files:
                    g, mapping = read_edge_list(path, False, mapping)
                    loaded.append(g)
                n = len(mapping)
                graphs = [Graph(n, g.edges) for g in loaded]
                return CoverInstance(graphs, cfg.name or Path(cfg.edge_files[0]).stem)
            spec = _generator_spec(cfg, seed)
            name = f"{cfg.name}-s{seed}" if cfg.name else None
            return cover_instance(spec, name)
        graph, colors, mapping = _single_graph(cfg, seed, cfg.objective == "centrality")
        name = cfg.name or (Path(cfg.edge_files[0]).stem if cfg.edge_files else f"{cfg.graph}-n{graph.n}-k{cfg.k}")
        if cfg.objective == "centrality":
            target = pick_median_degree_target(graph) if cfg.target is None else cfg.target
            return CentralityInstance(graph, colors, target, f"{name}-s{seed}")
        probs = cfg.edge_prob
        if cfg.prob_file is not None:
            if mapping is None:
                raise InstanceLoadError("prob_file needs file-based graphs")
            probs = read_probabilities(cfg.prob_file, mapping, graph)
        return CascadeModel(graph, probs, cfg.samples, seed, colors, f"{name}-s{seed}")
    except (OSError, InstanceError) as exc:
        raise InstanceLoadError(str(exc)) from exc


# -- algorithms ----------------------------------------------------------------


def _lp(backend):
    def run(inst, B, seed, cfg):
        lp_cfg = LPGreedyConfig(
            budget=B,
            repetitions=cfg.repetitions,
            phi=cfg.phi,
            backend=backend,
            epsilon=cfg.epsilon,
            seed=seed,
            mwu_rounds=cfg.mwu_rounds,
        )
        name = "lp_greedy" if backend == "exact" else "lp_greedy_mwu"
        return lp_greedy(inst, lp_cfg, name=name)

    return run


ALGORITHMS: dict[str, Callable[..., RunResult]] = {
    "lp_greedy": _lp("exact"),
    "lp_greedy_mwu": _lp("mwu"),
    "lp_greedy_pipeline": lambda inst, B, seed, cfg: lp_greedy_full_pipeline(
        inst, B, cfg.epsilon, cfg.delta, seed, cfg.per_color_budget, backend=cfg.backend, mwu_rounds=cfg.mwu_rounds
    ),
    "greedy_round_robin": lambda inst, B, seed, cfg: greedy_round_robin(inst, B),
    "greedy_minimum": lambda inst, B, seed, cfg: greedy_minimum(inst, B),
    "greedy_sum": lambda inst, B, seed, cfg: greedy_sum(inst, B),
    "saturate": lambda inst, B, seed, cfg: binary_search_opt("saturate", inst, B, cfg.rel_tol),
    "udwani_mwu": lambda inst, B, seed, cfg: binary_search_opt(
        "udwani_mwu", inst, B, cfg.rel_tol, iterations=cfg.udwani_iterations
    ),
}


def _row_extra(res: RunResult) -> dict:
    keep = ("phi", "reps", "backend", "probes", "opt_guess", "B_prime", "preprocessed")
    return {k: res.extra[k] for k in keep if k in res.extra}


def run_cell(inst: MultiObjectiveInstance, family: str, algorithm: str, B: int, seed: int, cfg: ExperimentConfig) -> RecordRow:
    """One (algorithm, B, seed) run under the configured time limit."""
    calls0 = inst.calls
    t0 = time.perf_counter()
    inst.set_deadline(time.monotonic() + cfg.time_limit_s)
    try:
        res = ALGORITHMS[algorithm](inst, B, seed, cfg)
    except TimeLimitExceeded:
        return RecordRow(inst.name, family, algorithm, B, seed, math.nan, -1, inst.calls - calls0,
                         round(time.perf_counter() - t0, 6), {"status": "timeout"})
    finally:
        inst.set_deadline(None)
    return RecordRow(
        instance=inst.name,
        objective_family=family,
        algorithm=algorithm,
        B=B,
        seed=seed,
        objective=res.objective,
        argmin_color=res.argmin_color,
        oracle_calls=res.oracle_calls,
        wall_time_s=round(res.wall_time, 6),
        extra=_row_extra(res),
    )


def _cells(cfg: ExperimentConfig, build, cell, log=None) -> list[RecordRow]:
    """Run every cell, appending to ``<out>.partial`` as rows complete."""
    out = Path(cfg.out)
    partial = out.with_name(out.name + ".partial")
    out.parent.mkdir(parents=True, exist_ok=True)
    rows: list[RecordRow] = []
    with open(partial, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(HEADER)
        for seed in cfg.seeds:
            inst = build(seed)
            too_big = [B for B in cfg.budgets if B > inst.n]
            if too_big:
                raise ConfigError(f"budgets {too_big} exceed the universe size {inst.n}")
            for row in cell(inst, seed):
                rows.append(row)
                writer.writerow(row.to_csv())
                fh.flush()
                if log:
                    log(row)
    rows.sort(key=RecordRow.key)
    write_csv(rows, out)
    os.remove(partial)
    return rows


def run_experiment(cfg: ExperimentConfig, log=None) -> list[RecordRow]:
    """Every (algorithm, B, seed) cell; one instance per seed shared by all algorithms."""

    def cell(inst, seed):
        for algorithm in cfg.algorithms:
            for B in cfg.budgets:
                yield run_cell(inst, cfg.objective, algorithm, B, seed, cfg)

    return _cells(cfg, lambda s: build_instance(cfg, s), cell, log)


AXES = {"reps": "repetitions", "repetitions": "repetitions", "phi": "phi"}
ABLATION_DEFAULTS = {
    "reps": [1, 2, 5, 10, 20, 50],
    "phi": [1, 2, 5, 10, 15, 25, 50],
}


def ablation_config(**changes) -> ExperimentConfig:
    """ER(64, 0.1) cover with k=20, B=20, five seeds, LP Greedy only."""
    base = ExperimentConfig(
        objective="cover", graph="er", n=64, k=20, p=0.1,
        algorithms=["lp_greedy"], budgets=[20], seeds=[0, 1, 2, 3, 4],
        out="ablation.csv", repetitions=20, phi=10.0,
    )
    return base.replace(**changes)


def ablation(cfg: ExperimentConfig, axis: str, values, log=None) -> list[RecordRow]:
    """Sweep repetitions (at the configured phi) or phi (at the configured repetitions)."""
    if axis not in AXES:
        raise ConfigError(f"axis must be one of {sorted(set(AXES))}")
    values = list(values)
    if not values:
        raise ConfigError("ablation needs at least one value")
    field_name = AXES[axis]

    def cell(inst, seed):
        for value in values:
            sub = cfg.replace(**{field_name: value})
            for algorithm in cfg.algorithms:
                for B in cfg.budgets:
                    yield run_cell(inst, cfg.objective, algorithm, B, seed, sub)

    rows = _cells(cfg, lambda s: build_instance(cfg, s), cell, log)
    tag = "reps" if field_name == "repetitions" else "phi"
    rows.sort(key=lambda r: (r.algorithm, r.B, float(r.extra.get(tag, 0)), r.seed))
    write_csv(rows, cfg.out)
    return rows


@dataclass
class SummaryRow:
    algorithm: str
    B: int
    group: object
    runs: int
    timeouts: int
    objective_mean: float
    objective_std: float
    calls_mean: float
    calls_std: float
    time_mean: float
    time_std: float


def summarize(rows: list[RecordRow], by: str | None = None) -> list[SummaryRow]:
    """Mean and population std per (algorithm, B), optionally split by an ``extra`` key."""
    if not rows:
        raise ConfigError("nothing to summarize")
    groups: dict[tuple, list[RecordRow]] = {}
    for r in rows:
        g = r.extra.get(by) if by else None
        groups.setdefault((r.algorithm, r.B, g), []).append(r)
    out = []
    for (alg, B, g), rs in sorted(groups.items(), key=lambda kv: (kv[0][0], kv[0][1], str(kv[0][2]))):
        ok = [r for r in rs if not r.timed_out]
        obj = np.array([r.objective for r in ok]) if ok else np.array([math.nan])
        calls = np.array([r.oracle_calls for r in ok], dtype=float) if ok else np.array([math.nan])
        wall = np.array([r.wall_time_s for r in ok]) if ok else np.array([math.nan])
        out.append(SummaryRow(alg, B, g, len(ok), len(rs) - len(ok),
                              float(obj.mean()), float(obj.std()),
                              float(calls.mean()), float(calls.std()),
                              float(wall.mean()), float(wall.std())))
    return out


def format_summary(summary: list[SummaryRow]) -> str:
    grouped = any(s.group is not None for s in summary)
    head = ["algorithm", "B"] + (["group"] if grouped else []) + [
        "runs", "objective_mean", "objective_std", "calls_mean", "calls_std", "time_mean", "time_std"]
    lines = [",".join(head)]
    for s in summary:
        vals = [s.algorithm, str(s.B)] + ([str(s.group)] if grouped else []) + [
            str(s.runs), f"{s.objective_mean:.6g}", f"{s.objective_std:.6g}",
            f"{s.calls_mean:.6g}", f"{s.calls_std:.6g}", f"{s.time_mean:.4g}", f"{s.time_std:.4g}"]
        lines.append(",".join(vals))
    return "\n".join(lines)
