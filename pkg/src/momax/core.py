"""Multiobjective instances, set-function oracles and evaluation accounting."""

from __future__ import annotations

import itertools
import math
import time
from typing import Iterable, Sequence

import numpy as np

TOL = 1e-9


class InputError(ValueError):
    """Bad element index, budget or other malformed argument."""


class InstanceError(ValueError):
    """An instance that cannot be built from the given data."""


class TimeLimitExceeded(RuntimeError):
    pass


class SubmodularOracle:
    """A nonnegative set function over elements ``0..n-1`` with a call counter.

    Subclasses either implement :meth:`evaluate` (one set at a time) or
    override the three ``_state*`` hooks to evaluate many augmented sets in
    one vectorized pass.  Every set-function value handed out counts as one
    evaluation, whichever path produced it.
    """

    def __init__(self, n: int):
        if n < 1:
            raise InputError("universe must contain at least one element")
        self.n = int(n)
        self.calls = 0
        self.deadline: float | None = None
        self._cache_key: frozenset | None = None
        self._cache_state = None

    # -- hooks ---------------------------------------------------------------

    def evaluate(self, members: frozenset) -> float:
        raise NotImplementedError

    def _state(self, members: frozenset):
        return members

    def _state_value(self, state) -> float:
        return float(self.evaluate(state))

    def _state_augmented(self, state, candidates: np.ndarray) -> np.ndarray:
        return np.array([float(self.evaluate(state | {int(v)})) for v in candidates])

    # -- accounting ----------------------------------------------------------

    def _count(self, amount: int) -> None:
        self.calls += amount
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise TimeLimitExceeded("oracle evaluation past the run deadline")

    def _check(self, v: int) -> int:
        v = int(v)
        if not 0 <= v < self.n:
            raise InputError(f"element {v} outside universe of size {self.n}")
        return v

    def _prepared(self, S: Iterable[int]):
        key = S if isinstance(S, frozenset) else frozenset(int(v) for v in S)
        if key != self._cache_key:
            for v in key:
                self._check(v)
            self._cache_state = self._state(key)
            self._cache_key = key
        return self._cache_state

    # -- public API ----------------------------------------------------------

    def value(self, S: Iterable[int]) -> float:
        state = self._prepared(S)
        self._count(1)
        return self._state_value(state)

    def augmented(self, S: Iterable[int], candidates: Sequence[int]) -> np.ndarray:
        """``f(S | {v})`` for each candidate; one evaluation per candidate."""
        cand = np.asarray(candidates, dtype=np.intp).reshape(-1)
        for v in cand:
            self._check(v)
        state = self._prepared(S)
        self._count(len(cand))
        if len(cand) == 0:
            return np.zeros(0)
        return np.asarray(self._state_augmented(state, cand), dtype=float)

    def gains(self, S: Iterable[int], candidates: Sequence[int], base: float | None = None) -> np.ndarray:
        """Marginal gains ``f(v | S)``; ``base`` is a cached ``f(S)``."""
        if base is None:
            base = self.value(S)
        return self.augmented(S, candidates) - base

    def marginal(self, v: int, S: Iterable[int], base: float | None = None) -> float:
        return float(self.gains(S, [self._check(v)], base)[0])

    def reset_calls(self) -> None:
        self.calls = 0


class FunctionOracle(SubmodularOracle):
    """Wraps a plain Python callable on frozensets."""

    def __init__(self, n: int, fn):
        super().__init__(n)
        self.fn = fn

    def evaluate(self, members):
        return self.fn(members)


class ModularOracle(SubmodularOracle):
    """``f(S) = sum of weights``; handy for tests and as a sanity objective."""

    def __init__(self, weights):
        w = np.asarray(weights, dtype=float)
        if np.any(w < 0):
            raise InputError("modular weights must be nonnegative")
        super().__init__(len(w))
        self.weights = w

    def _state(self, members):
        inside = np.zeros(self.n, dtype=bool)
        inside[list(members)] = True
        return inside, float(self.weights[inside].sum())

    def _state_value(self, state):
        return state[1]

    def _state_augmented(self, state, candidates):
        inside, total = state
        return total + np.where(inside[candidates], 0.0, self.weights[candidates])


class ShiftedOracle(SubmodularOracle):
    """``A -> f(A | T)`` for a fixed set ``T``; evaluations are charged to ``f``."""

    def __init__(self, base: SubmodularOracle, shift: Iterable[int]):
        super().__init__(base.n)
        self.base = base
        self.shift = frozenset(int(v) for v in shift)

    @property
    def calls(self):
        return self.base.calls

    @calls.setter
    def calls(self, value):
        # the base counter is the single source of truth
        pass

    def _count(self, amount):
        self.base._count(amount)

    def _state(self, members):
        return self.base._state(members | self.shift)

    def _state_value(self, state):
        return self.base._state_value(state)

    def _state_augmented(self, state, candidates):
        return self.base._state_augmented(state, candidates)

    def reset_calls(self):
        self.base.reset_calls()


class MultiObjectiveInstance:
    """Universe ``0..n-1``, colors ``0..k-1`` and one oracle per color."""

    def __init__(self, oracles: Sequence[SubmodularOracle], name: str = "instance"):
        if len(oracles) < 1:
            raise InputError("at least one color is required")
        n = oracles[0].n
        if any(o.n != n for o in oracles):
            raise InstanceError("all oracles must share the same universe")
        self.oracles = list(oracles)
        self.n = n
        self.k = len(oracles)
        self.name = name

    @property
    def calls(self) -> int:
        return sum(o.calls for o in self._distinct_counters())

    def _distinct_counters(self):
        seen, out = set(), []
        for o in self.oracles:
            root = o
            while isinstance(root, ShiftedOracle):
                root = root.base
            if id(root) not in seen:
                seen.add(id(root))
                out.append(root)
        return out

    def reset_calls(self) -> None:
        for o in self._distinct_counters():
            o.reset_calls()

    def set_deadline(self, deadline: float | None) -> None:
        for o in self._distinct_counters():
            o.deadline = deadline

    def values(self, S: Iterable[int]) -> np.ndarray:
        key = frozenset(int(v) for v in S)
        return np.array([o.value(key) for o in self.oracles])

    def shifted(self, T: Iterable[int]) -> "MultiObjectiveInstance":
        return MultiObjectiveInstance([ShiftedOracle(o, T) for o in self.oracles], self.name)


class ElementSet:
    """Insertion-ordered set of element indices."""

    def __init__(self, members: Iterable[int] = (), n: int | None = None):
        self._order: list[int] = []
        self._set: set[int] = set()
        self.n = n
        for v in members:
            self.add(v)

    def add(self, v: int) -> None:
        v = int(v)
        if self.n is not None and not 0 <= v < self.n:
            raise InputError(f"element {v} outside universe of size {self.n}")
        if v in self._set:
            raise InputError(f"element {v} already present")
        self._order.append(v)
        self._set.add(v)

    def __contains__(self, v) -> bool:
        return int(v) in self._set

    def __iter__(self):
        return iter(self._order)

    def __len__(self) -> int:
        return len(self._order)

    def __eq__(self, other) -> bool:
        if isinstance(other, ElementSet):
            return self._set == other._set
        return self._set == set(other)

    def __repr__(self) -> str:
        return f"ElementSet({self._order})"

    def frozen(self) -> frozenset:
        return frozenset(self._set)

    def as_list(self) -> list[int]:
        return list(self._order)


def _simplex(values: dict, what: str) -> dict:
    total = float(sum(values.values()))
    if any(p < 0 for p in values.values()):
        raise InputError(f"{what} must be nonnegative")
    if total <= 0:
        raise InputError(f"{what} must have positive total mass")
    return {key: p / total for key, p in values.items()}


class ElementDistribution(dict):
    """Probability distribution over elements (normalized on construction)."""

    def __init__(self, mass: dict):
        super().__init__(_simplex(dict(mass), "element masses"))

    @classmethod
    def from_array(cls, x, tol: float = 0.0) -> "ElementDistribution":
        x = np.clip(np.asarray(x, dtype=float), 0.0, None)
        return cls({int(v): float(x[v]) for v in np.flatnonzero(x > tol)})

    def to_array(self, n: int) -> np.ndarray:
        x = np.zeros(n)
        for v, p in self.items():
            x[v] = p
        return x

    def support(self) -> list[int]:
        return sorted(v for v, p in self.items() if p > 0)


class ColorWeights(dict):
    def __init__(self, weight: dict):
        super().__init__(_simplex(dict(weight), "color weights"))

    @classmethod
    def uniform(cls, k: int) -> "ColorWeights":
        return cls({c: 1.0 for c in range(k)})

    def to_array(self, k: int) -> np.ndarray:
        y = np.zeros(k)
        for c, p in self.items():
            y[c] = p
        return y


def marginal_gain(oracle: SubmodularOracle, v: int, S: Iterable[int], base: float | None = None) -> float:
    return oracle.marginal(v, S, base)


def min_value(instance: MultiObjectiveInstance, S: Iterable[int]) -> tuple[float, int]:
    """Smallest color value and its color (lowest index on ties)."""
    vals = instance.values(S)
    c = int(np.argmin(vals))
    return float(vals[c]), c


def brute_force_opt(instance: MultiObjectiveInstance, B: int, max_subsets: int = 10**7):
    """Exact maximizer of ``min_c f_c(S)`` over ``|S| <= B``.

    Subsets are visited in lexicographic order (by size, then
    ``itertools.combinations`` order) and only a strictly better value
    replaces the incumbent.  Monotonicity means only ``|S| = min(B, n)``
    needs to be visited, but smaller sizes are kept for non-monotone test
    doubles.
    """
    n = instance.n
    B = min(int(B), n)
    if B < 0:
        raise InputError("budget must be nonnegative")
    total = sum(math.comb(n, b) for b in range(B + 1))
    if total > max_subsets:
        raise InputError(f"{total} subsets exceed the enumeration guard of {max_subsets}")
    best_set, best_val = (), -math.inf
    for size in range(B + 1):
        for combo in itertools.combinations(range(n), size):
            val = min(o.value(combo) for o in instance.oracles)
            if val > best_val + TOL:
                best_set, best_val = combo, val
    return ElementSet(best_set, n), float(best_val)


def max_singleton_gain(instance: MultiObjectiveInstance) -> float:
    """``M = max_c max_v f_c(v | {})``, costs ``k*(n+1)`` evaluations."""
    everything = np.arange(instance.n)
    return float(max(o.gains((), everything).max() for o in instance.oracles))
