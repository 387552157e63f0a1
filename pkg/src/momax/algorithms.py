"""LP Greedy, pre-processing and the baseline algorithms.

Every algorithm returns a :class:`RunResult`.  ``oracle_calls`` is the
growth of the instance's evaluation counters during the run, including the
``k`` evaluations that report the final per-color values.  All algorithms
compute the singleton gains ``f_c(v | {})`` once per run and reuse them as
lazy upper bounds.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .core import (
    TOL,
    ElementSet,
    InputError,
    MultiObjectiveInstance,
    SubmodularOracle,
)
from .lp import (
    IterationOracle,
    LazyBounds,
    MWUConfig,
    lazy_best_response,
    solve_lazy_resolve,
    solve_mwu,
)

BACKENDS = ("exact", "mwu")


class BudgetTooSmall(InputError):
    pass


@dataclass
class RunResult:
    solution: ElementSet
    per_color_values: dict
    objective: float
    oracle_calls: int
    wall_time: float
    seed: int | None = None
    algorithm_name: str = ""
    instance_name: str = ""
    extra: dict = field(default_factory=dict)

    @property
    def argmin_color(self) -> int:
        vals = [self.per_color_values[c] for c in sorted(self.per_color_values)]
        return int(np.argmin(vals))


@dataclass
class LPGreedyConfig:
    budget: int
    repetitions: int = 20
    phi: float = 10.0
    backend: str = "exact"
    epsilon: float = 0.1
    seed: int = 0
    mwu_rounds: int | None = None  # overrides the worst-case round count

    def __post_init__(self):
        if self.budget < 1:
            raise InputError("budget must be at least 1")
        if self.repetitions < 1:
            raise InputError("need at least one repetition")
        if self.phi < 1:
            raise InputError("phi must be at least 1")
        if self.backend not in BACKENDS:
            raise InputError(f"backend must be one of {BACKENDS}")

    @staticmethod
    def repetitions_for(delta: float) -> int:
        return max(math.ceil(math.log(2 / delta)), 1)


@dataclass
class PreprocessResult:
    T: ElementSet
    surviving_colors: list
    per_color_added: dict


class _Run:
    """Timer and call counter shared by every algorithm."""

    def __init__(self, instance: MultiObjectiveInstance, name: str, seed=None):
        self.instance = instance
        self.name = name
        self.seed = seed
        self.calls0 = instance.calls
        self.t0 = time.perf_counter()

    def finish(self, S, **extra) -> RunResult:
        S = S if isinstance(S, ElementSet) else ElementSet(S, self.instance.n)
        vals = self.instance.values(S)
        return RunResult(
            solution=S,
            per_color_values={c: float(v) for c, v in enumerate(vals)},
            objective=float(vals.min()),
            oracle_calls=self.instance.calls - self.calls0,
            wall_time=time.perf_counter() - self.t0,
            seed=self.seed,
            algorithm_name=self.name,
            instance_name=self.instance.name,
            extra=extra,
        )


def _check_budget(instance, B):
    if B < 0:
        raise InputError("budget must be nonnegative")
    if B > instance.n:
        raise InputError(f"budget {B} exceeds universe size {instance.n}")


def singleton_gains(instance: MultiObjectiveInstance, exclude=()):
    """``(f_c({}), f_c(v | {}))`` for every color; ``k * (n + 1)`` evaluations."""
    allowed = np.ones(instance.n, dtype=bool)
    allowed[list(exclude)] = False
    cand = np.flatnonzero(allowed)
    base = np.array([o.value(()) for o in instance.oracles])
    G = np.zeros((instance.k, instance.n))
    for c, o in enumerate(instance.oracles):
        G[c, cand] = o.gains((), cand, base[c])
    return base, G


def _sample(x: np.ndarray, rng: np.random.Generator) -> int:
    cdf = np.cumsum(x)
    u = rng.random() * cdf[-1]
    v = int(np.searchsorted(cdf, u, side="right"))
    v = min(v, len(x) - 1)
    while x[v] <= 0:
        v -= 1
    return v


# -- single objective --------------------------------------------------------


def lazy_greedy_single(
    oracle: SubmodularOracle,
    B: int,
    start=(),
    exclude=(),
    initial: tuple[float, np.ndarray] | None = None,
    stop_at: float | None = None,
) -> ElementSet:
    """Accelerated greedy with stale marginals as upper bounds.

    ``initial = (f(start), gains at start)`` skips the first full pass.
    With ``B == 1`` and no cached gains the choice is made from the ``n``
    values ``f(start | {v})`` alone.  ``stop_at`` ends the run once
    ``f(S)`` reaches it.
    """
    S = [int(v) for v in start]
    allowed = np.ones(oracle.n, dtype=bool)
    allowed[S] = False
    allowed[list(exclude)] = False
    steps = min(B, int(allowed.sum()))
    result = ElementSet(S, oracle.n)
    if steps <= 0:
        return result
    if initial is None:
        if stop_at is None and steps == 1:
            cand = np.flatnonzero(allowed)
            aug = oracle.augmented(S, cand)
            result.add(int(cand[int(np.argmax(aug))]))
            return result
        base = oracle.value(S)
        g = np.zeros((1, oracle.n))
        cand = np.flatnonzero(allowed)
        g[0, cand] = oracle.gains(S, cand, base)
    else:
        base, g0 = initial
        g = np.array(g0, dtype=float).reshape(1, -1).copy()
    bounds = LazyBounds(g, allowed.copy())
    y = np.ones(1)
    for _ in range(steps):
        if stop_at is not None and base >= stop_at - TOL:
            break
        key = frozenset(S)

        def fresh(v, key=key, base=base):
            return np.array([oracle.marginal(v, key, base)])

        v, _ = lazy_best_response(y, bounds, fresh, allowed)
        base = base + bounds.g[0, v]
        S.append(v)
        result.add(v)
        allowed[v] = False
        bounds.stale()
    return result


def greedy_single_naive(oracle: SubmodularOracle, B: int) -> ElementSet:
    """Plain greedy: every step evaluates ``f(S | {v})`` for all remaining ``v``."""
    S: list[int] = []
    allowed = np.ones(oracle.n, dtype=bool)
    for _ in range(min(B, oracle.n)):
        cand = np.flatnonzero(allowed)
        aug = oracle.augmented(S, cand)
        v = int(cand[int(np.argmax(aug))])
        S.append(v)
        allowed[v] = False
    return ElementSet(S, oracle.n)


class CombinedOracle(SubmodularOracle):
    """``sum_c w_c * min(f_c(S), cap)``; evaluations are charged to the color oracles."""

    def __init__(self, instance: MultiObjectiveInstance, weights, cap: float | None = None):
        super().__init__(instance.n)
        self.instance = instance
        self.weights = np.asarray(weights, dtype=float)
        self.cap = cap

    def _combine(self, vals: np.ndarray) -> np.ndarray:
        if self.cap is not None:
            vals = np.minimum(vals, self.cap)
        return self.weights @ vals

    def value(self, S):
        key = frozenset(int(v) for v in S)
        vals = np.array([o.value(key) for o in self.instance.oracles])
        return float(self._combine(vals))

    def augmented(self, S, candidates):
        key = frozenset(int(v) for v in S)
        cand = np.asarray(candidates, dtype=np.intp).reshape(-1)
        vals = np.vstack([o.augmented(key, cand) for o in self.instance.oracles])
        return np.asarray(self._combine(vals), dtype=float).reshape(-1)

    def combined_gains(self, base_vals: np.ndarray, G: np.ndarray) -> tuple[float, np.ndarray]:
        """Combined value and gains from cached per-color values and gains."""
        base = float(self._combine(base_vals))
        aug = self._combine(base_vals[:, None] + G)
        return base, np.asarray(aug - base).reshape(-1)


# -- LP Greedy ---------------------------------------------------------------


def _lp_greedy_once(instance, cfg: LPGreedyConfig, base0, G0, allowed0, rng, M):
    B, phi = cfg.budget, cfg.phi
    k = instance.k
    allowed = allowed0.copy()
    bounds = LazyBounds(G0.copy(), allowed0.copy())
    base = base0.copy()
    S: list[int] = []
    solves = 0
    steps = min(B, int(allowed.sum()))
    for _ in range(steps):
        it = IterationOracle(instance, S, base)
        if cfg.backend == "exact":
            sol = solve_lazy_resolve(bounds, base, B, phi, it.block, allowed)
            x = sol.x
            solves += sol.solves
        else:
            scale = B * M + phi * float(base.max())
            if cfg.mwu_rounds is not None:
                mcfg = MWUConfig(cfg.mwu_rounds, min(cfg.epsilon / (4 * B), 0.5), scale or 1.0)
            else:
                mcfg = MWUConfig.for_budget(B, k, cfg.epsilon, scale or 1.0)
            dist, bounds = solve_mwu(it.column, bounds, mcfg, base, B, phi, allowed)
            x = dist.to_array(instance.n)
        v = _sample(x, rng)
        base = base + bounds.g[:, v]
        S.append(v)
        allowed[v] = False
        bounds.stale()
    return S, base, solves


def repetition_rng(seed: int, t: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(t,)))


def lp_greedy(instance: MultiObjectiveInstance, cfg: LPGreedyConfig, exclude=(), name: str = "lp_greedy") -> RunResult:
    """Independent repetitions of the randomized LP-guided greedy; keeps the best.

    Each step solves the iteration LP (exactly with lazy re-solves, or by MWU)
    over elements not yet chosen and samples one element from its solution.
    Repetition ``t`` draws from its own stream derived from ``(seed, t)``.
    """
    if cfg.budget > instance.n:
        raise InputError(f"budget {cfg.budget} exceeds universe size {instance.n}")
    run = _Run(instance, name, cfg.seed)
    allowed0 = np.ones(instance.n, dtype=bool)
    allowed0[list(exclude)] = False
    base0, G0 = singleton_gains(instance, exclude)
    M = float(G0.max()) if G0.size else 0.0
    best, best_val, history, solves = None, -math.inf, [], 0
    for t in range(cfg.repetitions):
        S, vals, ns = _lp_greedy_once(instance, cfg, base0, G0, allowed0, repetition_rng(cfg.seed, t), M)
        solves += ns
        val = float(vals.min())
        if val >= best_val:
            best, best_val = S, val
        history.append(best_val)
    extra = {"phi": cfg.phi, "reps": cfg.repetitions, "backend": cfg.backend}
    if cfg.backend == "exact":
        extra["lp_solves"] = solves
    res = run.finish(best, **extra)
    res.extra["best_by_rep"] = history
    return res


def preprocess(instance: MultiObjectiveInstance, B_prime: int) -> PreprocessResult:
    """Greedily add ``B_prime`` elements per color, in color order, to a shared set."""
    if B_prime < 0:
        raise InputError("per-color budget must be nonnegative")
    if instance.k * B_prime > instance.n:
        raise InputError(f"k * B' = {instance.k * B_prime} exceeds n = {instance.n}")
    T: list[int] = []
    added = {}
    for c, oracle in enumerate(instance.oracles):
        grown = lazy_greedy_single(oracle, B_prime, start=T).as_list()
        added[c] = grown[len(T):]
        T = grown
    return PreprocessResult(ElementSet(T, instance.n), list(range(instance.k)), added)


def per_color_budget(k: int, epsilon: float) -> int:
    """``ceil(1 / gamma)`` with ``gamma = eps^2 / (36 log k)``; zero for one color."""
    if k <= 1:
        return 0
    return math.ceil(36 * math.log(k) / epsilon**2)


def lp_greedy_full_pipeline(
    instance: MultiObjectiveInstance,
    B: int,
    epsilon: float = 0.1,
    delta: float = 0.1,
    seed: int = 0,
    B_prime: int | None = None,
    phi: float = 1.0,
    backend: str = "exact",
    mwu_rounds: int | None = None,
) -> RunResult:
    """Pre-processing, then LP Greedy with the leftover budget on ``A -> f_c(A | T)``.

    All colors are kept after pre-processing: colors already satisfied by
    ``T`` simply never bind in the minimum.
    """
    _check_budget(instance, B)
    run = _Run(instance, "lp_greedy_pipeline", seed)
    if B_prime is None:
        B_prime = per_color_budget(instance.k, epsilon)
    if instance.k * B_prime > instance.n:
        raise BudgetTooSmall(
            f"pre-processing needs k*B' = {instance.k * B_prime} elements but n = {instance.n}"
        )
    pre = preprocess(instance, B_prime)
    B_rest = B - len(pre.T)
    if B_rest < 1:
        need = 108 * instance.k / epsilon**3 * math.log(max(instance.k, 2))
        raise BudgetTooSmall(
            f"budget {B} leaves {B_rest} elements after pre-processing (|T| = {len(pre.T)}); "
            f"the guarantee asks for B >= 108 k log(k) / eps^3 = {need:.0f}"
        )
    shifted = instance.shifted(pre.T)
    cfg = LPGreedyConfig(
        budget=B_rest,
        repetitions=LPGreedyConfig.repetitions_for(delta),
        phi=phi,
        backend=backend,
        epsilon=epsilon,
        seed=seed,
        mwu_rounds=mwu_rounds,
    )
    inner = lp_greedy(shifted, cfg, exclude=pre.T)
    S = pre.T.as_list() + inner.solution.as_list()
    return run.finish(S, B_prime=B_prime, preprocessed=len(pre.T), reps=cfg.repetitions, phi=phi)


# -- greedy heuristics ---------------------------------------------------------


class _PerColorLazy:
    """Per-color lazy bounds and cached values along one growing solution."""

    def __init__(self, instance: MultiObjectiveInstance, singletons=None):
        self.instance = instance
        self.S: list[int] = []
        self.allowed = np.ones(instance.n, dtype=bool)
        if singletons is None:
            singletons = singleton_gains(instance)
        base0, G0 = singletons
        self.base = list(base0)
        self.bounds = [LazyBounds(G0[c:c + 1].copy(), np.ones(instance.n, dtype=bool)) for c in range(instance.k)]

    def value(self, c: int) -> float:
        if self.base[c] is None:
            self.base[c] = self.instance.oracles[c].value(self.S)
        return self.base[c]

    def best(self, c: int) -> int:
        oracle = self.instance.oracles[c]
        key, base = frozenset(self.S), self.value(c)

        def fresh(v):
            return np.array([oracle.marginal(v, key, base)])

        v, _ = lazy_best_response(np.ones(1), self.bounds[c], fresh, self.allowed)
        return v

    def add(self, v: int) -> None:
        for c in range(self.instance.k):
            b = self.bounds[c]
            if self.base[c] is not None and b.fresh[v]:
                self.base[c] = self.base[c] + b.g[0, v]
            else:
                self.base[c] = None
            b.stale()
        self.S.append(v)
        self.allowed[v] = False


def greedy_round_robin(instance: MultiObjectiveInstance, B: int) -> RunResult:
    """Step ``i`` (1-based) adds the best element for color ``i mod k``."""
    _check_budget(instance, B)
    run = _Run(instance, "greedy_round_robin")
    state = _PerColorLazy(instance)
    for i in range(1, B + 1):
        state.add(state.best(i % instance.k))
    return run.finish(state.S)


def greedy_minimum(instance: MultiObjectiveInstance, B: int) -> RunResult:
    """Each step adds the best element for the currently worst color."""
    _check_budget(instance, B)
    run = _Run(instance, "greedy_minimum")
    state = _PerColorLazy(instance)
    for _ in range(B):
        vals = [state.value(c) for c in range(instance.k)]
        state.add(state.best(int(np.argmin(vals))))
    return run.finish(state.S)


def greedy_sum(instance: MultiObjectiveInstance, B: int, weights=None) -> RunResult:
    """Lazy greedy on a fixed weighted sum of the colors (uniform by default)."""
    _check_budget(instance, B)
    run = _Run(instance, "greedy_sum")
    w = np.full(instance.k, 1.0 / instance.k) if weights is None else np.asarray(weights, dtype=float)
    base0, G0 = singleton_gains(instance)
    comb = CombinedOracle(instance, w)
    S = lazy_greedy_single(comb, B, initial=comb.combined_gains(base0, G0))
    return run.finish(S)


def saturate(instance: MultiObjectiveInstance, B: int, opt_guess: float, singletons=None) -> RunResult:
    """Lazy greedy on ``sum_c min(f_c(S), opt_guess)``; stops once every color reaches the guess."""
    _check_budget(instance, B)
    if opt_guess < 0:
        raise InputError("OPT guess must be nonnegative")
    run = _Run(instance, "saturate")
    if singletons is None:
        singletons = singleton_gains(instance)
    comb = CombinedOracle(instance, np.ones(instance.k), cap=opt_guess)
    S = lazy_greedy_single(
        comb, B, initial=comb.combined_gains(*singletons), stop_at=instance.k * opt_guess
    )
    return run.finish(S, opt_guess=opt_guess)


def udwani_mwu(
    instance: MultiObjectiveInstance,
    B: int,
    opt_guess: float,
    iterations: int = 100,
    eta: float = 0.1,
    singletons=None,
) -> RunResult:
    """Multiplicative weights over colors with a lazy-greedy inner solver.

    Iteration ``t`` greedily maximizes ``sum_c y_c f_c`` and then scales
    ``y_c`` by ``exp(-eta * min(f_c(S_t), guess) / guess)``, moving weight to
    colors that fell short of the guess.  Returns the best ``S_t``.
    """
    _check_budget(instance, B)
    if opt_guess <= 0:
        raise InputError("OPT guess must be positive")
    run = _Run(instance, "udwani_mwu")
    if singletons is None:
        singletons = singleton_gains(instance)
    y = np.full(instance.k, 1.0 / instance.k)
    best, best_val = None, -math.inf
    for _ in range(iterations):
        comb = CombinedOracle(instance, y)
        S = lazy_greedy_single(comb, B, initial=comb.combined_gains(*singletons))
        vals = instance.values(S)
        if vals.min() > best_val:
            best, best_val = S, float(vals.min())
        y = y * np.exp(-eta * np.minimum(vals, opt_guess) / opt_guess)
        y = y / y.sum()
    return run.finish(best, opt_guess=opt_guess, iterations=iterations)


def opt_upper_bound(instance: MultiObjectiveInstance, B: int, singletons=None) -> float:
    """``min_c greedy_c(B) / (1 - 1/e)``, an upper bound on the optimum."""
    if singletons is None:
        singletons = singleton_gains(instance)
    base0, G0 = singletons
    vals = []
    for c, oracle in enumerate(instance.oracles):
        S = lazy_greedy_single(oracle, B, initial=(base0[c], G0[c]))
        vals.append(oracle.value(S.frozen()))
    return min(vals) / (1 - 1 / math.e)


SEARCHABLE: dict[str, Callable] = {"saturate": saturate, "udwani_mwu": udwani_mwu}


def binary_search_opt(
    algorithm: str,
    instance: MultiObjectiveInstance,
    B: int,
    rel_tol: float = 0.01,
    **kwargs,
) -> RunResult:
    """Bisect the guess on ``[0, U]`` and keep the best run seen.

    A probe succeeds when its solution reaches the guess, which moves the
    lower end up.  Stops once the bracket is at most ``rel_tol * U`` wide.
    """
    if not 0 < rel_tol < 1:
        raise InputError("rel_tol must lie in (0, 1)")
    if algorithm not in SEARCHABLE:
        raise InputError(f"no OPT search for {algorithm!r}")
    _check_budget(instance, B)
    fn = SEARCHABLE[algorithm]
    run = _Run(instance, algorithm)
    singletons = singleton_gains(instance)
    upper = opt_upper_bound(instance, B, singletons)
    lo, hi = 0.0, upper
    best, probes, guesses = None, 0, []
    if upper <= 0:
        best = fn(instance, B, 1.0, singletons=singletons) if algorithm == "udwani_mwu" else fn(instance, B, 0.0, singletons=singletons)
        probes = 1
    while hi - lo > rel_tol * upper:
        mid = 0.5 * (lo + hi)
        res = fn(instance, B, mid, singletons=singletons, **kwargs)
        probes += 1
        guesses.append(mid)
        if best is None or res.objective > best.objective:
            best = res
        if res.objective >= mid - TOL:
            lo = mid
        else:
            hi = mid
    return run.finish(best.solution, probes=probes, opt_guess=best.extra.get("opt_guess"), upper=upper)
