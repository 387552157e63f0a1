"""Per-iteration LP: payoff matrix, exact solve, and MWU with lazy evaluations.

For a partial solution ``S`` the payoff of element ``v`` for color ``c`` is
``B * f_c(v | S) + phi * f_c(S)``.  The LP asks for a distribution ``x`` over
elements maximizing the worst color's expected payoff; equivalently it is the
value of a zero-sum game between a color player and an element player.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import linprog

from .core import ElementDistribution, InputError, MultiObjectiveInstance

SUPPORT_TOL = 1e-12
TIE_TOL = 1e-9


class SolverError(RuntimeError):
    pass


class MWUConfigError(ValueError):
    pass


@dataclass
class IterationLP:
    gains: np.ndarray  # k x n marginal gains (or upper bounds on them)
    base: np.ndarray  # f_c(S) per color
    B: int
    phi: float = 1.0
    allowed: np.ndarray | None = None  # elements the distribution may use

    @property
    def payoff(self) -> np.ndarray:
        return self.B * self.gains + self.phi * self.base[:, None]

    @property
    def shape(self):
        return self.gains.shape


@dataclass
class LPSolution:
    x: np.ndarray  # dense distribution over all n elements
    xi: float
    duals: np.ndarray | None = None  # color weights certifying optimality
    solves: int = 1

    @property
    def distribution(self) -> ElementDistribution:
        return ElementDistribution.from_array(self.x)

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.x > SUPPORT_TOL)


@dataclass
class LazyBounds:
    """Upper bounds ``g[c, v] >= f_c(v | S)``; ``fresh[v]`` marks exact columns."""

    g: np.ndarray
    fresh: np.ndarray = field(default=None)

    def __post_init__(self):
        self.g = np.array(self.g, dtype=float)
        if self.fresh is None:
            self.fresh = np.zeros(self.g.shape[1], dtype=bool)
        self.fresh = np.asarray(self.fresh, dtype=bool).copy()

    @classmethod
    def exact(cls, gains: np.ndarray) -> "LazyBounds":
        return cls(gains, np.ones(gains.shape[1], dtype=bool))

    def stale(self) -> None:
        """Partial solution grew: every bound stays valid but none is exact."""
        self.fresh[:] = False

    def copy(self) -> "LazyBounds":
        return LazyBounds(self.g.copy(), self.fresh.copy())


@dataclass
class MWUConfig:
    T: int
    eta: float
    loss_scale: float = 1.0

    def __post_init__(self):
        if self.T < 1:
            raise MWUConfigError("MWU needs at least one round")
        if not 0 < self.eta < 1:
            raise MWUConfigError(f"step size {self.eta} must lie in (0, 1)")
        if self.loss_scale <= 0:
            raise MWUConfigError("loss scale must be positive")

    @classmethod
    def for_budget(cls, B: int, k: int, epsilon: float, loss_scale: float) -> "MWUConfig":
        """Rounds ``16 B^2 log(k) / eps^2`` and step ``eps / (4B)`` on losses in [0, 1].

        With losses scaled by ``2BM`` the raw step ``eps / (8 B^2 M)`` becomes
        ``eps / (4B)``, which also equals ``sqrt(log k / T)``.
        """
        T = max(1, math.ceil(16 * B**2 * math.log(k) / epsilon**2))
        return cls(T=T, eta=min(epsilon / (4 * B), 0.5), loss_scale=loss_scale)


def build_iteration_lp(instance: MultiObjectiveInstance, S, B: int, phi: float = 1.0) -> IterationLP:
    """Evaluate every marginal; costs ``k*(n - |S|)`` plus ``k`` base evaluations."""
    S = frozenset(int(v) for v in S)
    if len(S) >= B:
        raise InputError("partial solution already exhausts the budget")
    if phi < 1:
        raise InputError("phi must be at least 1")
    allowed = np.ones(instance.n, dtype=bool)
    allowed[list(S)] = False
    cand = np.flatnonzero(allowed)
    gains = np.zeros((instance.k, instance.n))
    base = np.zeros(instance.k)
    for c, oracle in enumerate(instance.oracles):
        base[c] = oracle.value(S)
        gains[c, cand] = oracle.gains(S, cand, base[c])
    return IterationLP(gains, base, B, phi, allowed)


def solve_game(payoff: np.ndarray, allowed: np.ndarray | None = None) -> LPSolution:
    """``max_x min_c (payoff @ x)_c`` over the simplex on ``allowed`` columns.

    Variables are ``x`` (one per allowed column) and ``xi``; HiGHS dual
    simplex returns a basic solution, so the support has at most ``k``
    elements.  Payoffs are rescaled to unit maximum before solving.
    """
    payoff = np.asarray(payoff, dtype=float)
    k, n = payoff.shape
    cols = np.arange(n) if allowed is None else np.flatnonzero(allowed)
    if len(cols) == 0:
        raise InputError("no element available to the LP")
    P = payoff[:, cols]
    x = np.zeros(n)
    if k == 1:
        # ties go to the lowest index
        j = int(np.argmax(P[0]))
        x[cols[j]] = 1.0
        return LPSolution(x, float(P[0, j]), np.ones(1))
    scale = float(np.abs(P).max())
    if scale == 0:
        x[cols[0]] = 1.0
        return LPSolution(x, 0.0, np.full(k, 1.0 / k))
    Ps = P / scale
    m = len(cols)
    c_obj = np.zeros(m + 1)
    c_obj[-1] = -1.0
    A_ub = np.hstack([-Ps, np.ones((k, 1))])
    A_eq = np.zeros((1, m + 1))
    A_eq[0, :m] = 1.0
    bounds = [(0, None)] * m + [(None, None)]
    res = linprog(c_obj, A_ub=A_ub, b_ub=np.zeros(k), A_eq=A_eq, b_eq=[1.0],
                  bounds=bounds, method="highs-ds")
    if res.status != 0:
        raise SolverError(
            f"LP solve failed ({res.message}); payoff range "
            f"[{P.min():.3g}, {P.max():.3g}], shape {P.shape}"
        )
    xs = np.clip(res.x[:m], 0.0, None)
    xs[xs < SUPPORT_TOL] = 0.0
    xs /= xs.sum()
    x[cols] = xs
    duals = -np.asarray(res.ineqlin.marginals)
    duals = np.clip(duals, 0.0, None)
    if duals.sum() > 0:
        duals /= duals.sum()
    xi = float((P @ xs).min())
    return LPSolution(x, xi, duals)


def solve_exact(lp: IterationLP) -> LPSolution:
    return solve_game(lp.payoff, lp.allowed)


def lazy_best_response(
    y: np.ndarray,
    bounds: LazyBounds,
    fresh_eval: Callable[[int], np.ndarray],
    allowed: np.ndarray | None = None,
) -> tuple[int, int]:
    """Element maximizing ``sum_c y_c f_c(v | S)``, scanning bounds in decreasing order.

    ``fresh_eval(v)`` returns the exact gain column of ``v``.  The scan stops
    once the remaining bounds fall below the best exact score by more than
    a relative ``TIE_TOL``; rounding can leave a stale bound a few ulps under
    the gain it covers, and a near tie may still win on index.  Returns
    ``(element, number of fresh evaluations)``.
    """
    g = bounds.g
    scores = y @ g
    idx = np.arange(g.shape[1])
    if allowed is not None:
        idx = idx[allowed]
    order = idx[np.lexsort((idx, -scores[idx]))]
    best, best_score, evaluated = -1, -math.inf, 0
    for v in order:
        v = int(v)
        bound = scores[v]
        if best >= 0:
            slack = TIE_TOL * max(1.0, abs(best_score))
            if bound < best_score - slack:
                break
        if not bounds.fresh[v]:
            g[:, v] = fresh_eval(v)
            bounds.fresh[v] = True
            evaluated += 1
            scores[v] = y @ g[:, v]
        s = scores[v]
        if s > best_score or (s == best_score and v < best):
            best, best_score = v, s
    return best, evaluated


def solve_mwu(
    fresh_eval: Callable[[int], np.ndarray],
    bounds: LazyBounds,
    cfg: MWUConfig,
    base: np.ndarray | None = None,
    B: int = 1,
    phi: float = 1.0,
    allowed: np.ndarray | None = None,
) -> tuple[ElementDistribution, LazyBounds]:
    """Approximate the game value by multiplicative weights on the colors.

    Each round the element player best-responds (lazily) to the color
    weights; the color weights shrink by ``1 - eta * loss`` where the loss is
    the payoff divided by ``cfg.loss_scale``.  The returned distribution is
    the average of the ``T`` best responses.
    """
    k, n = bounds.g.shape
    base = np.zeros(k) if base is None else np.asarray(base, dtype=float)
    y = np.full(k, 1.0 / k)
    counts = np.zeros(n)
    for _ in range(cfg.T):
        v, _ = lazy_best_response(y, bounds, fresh_eval, allowed)
        loss = (B * bounds.g[:, v] + phi * base) / cfg.loss_scale
        y = y * (1.0 - cfg.eta * loss)
        if np.any(y < 0):
            raise MWUConfigError(
                f"color weight went negative: eta={cfg.eta} with losses up to "
                f"{loss.max():.3g} (loss_scale={cfg.loss_scale})"
            )
        total = y.sum()
        y = y / total if total > 0 else np.full(k, 1.0 / k)
        counts[v] += 1
    return ElementDistribution.from_array(counts / cfg.T), bounds


def game_value(payoff: np.ndarray, x) -> float:
    """Worst-color expected payoff of a distribution."""
    if isinstance(x, dict):
        x = ElementDistribution.to_array(x, payoff.shape[1])
    return float((np.asarray(payoff) @ np.asarray(x)).min())


def solve_lazy_resolve(
    bounds: LazyBounds,
    base: np.ndarray,
    B: int,
    phi: float,
    fresh_eval_many: Callable[[np.ndarray], np.ndarray],
    allowed: np.ndarray | None = None,
    solver: Callable[[np.ndarray, np.ndarray | None], LPSolution] = solve_game,
) -> LPSolution:
    """Solve the LP on upper bounds, refreshing supported stale columns until none remain.

    ``fresh_eval_many(vs)`` returns the exact ``k x len(vs)`` gain block.
    Because bounds only overstate payoffs and the final support is exact,
    the final value equals the LP value on true gains.
    """
    solves = 0
    while True:
        sol = solver(B * bounds.g + phi * base[:, None], allowed)
        solves += 1
        supp = sol.support
        stale = supp[~bounds.fresh[supp]]
        if len(stale) == 0:
            sol.solves = solves
            return sol
        bounds.g[:, stale] = fresh_eval_many(stale)
        bounds.fresh[stale] = True


class IterationOracle:
    """Fresh gain columns for one partial solution, charged to the instance."""

    def __init__(self, instance: MultiObjectiveInstance, S, base: np.ndarray):
        self.instance = instance
        self.S = frozenset(int(v) for v in S)
        self.base = base

    def column(self, v: int) -> np.ndarray:
        return self.block(np.array([v]))[:, 0]

    def block(self, vs: np.ndarray) -> np.ndarray:
        return np.vstack([o.gains(self.S, vs, b) for o, b in zip(self.instance.oracles, self.base)])
