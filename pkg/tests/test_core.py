import itertools
import time

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from momax.core import (
    ColorWeights,
    ElementDistribution,
    ElementSet,
    FunctionOracle,
    InputError,
    ModularOracle,
    MultiObjectiveInstance,
    ShiftedOracle,
    TimeLimitExceeded,
    brute_force_opt,
    marginal_gain,
    max_singleton_gain,
    min_value,
)

from conftest import random_cover


def test_element_set_keeps_order_and_rejects_duplicates():
    s = ElementSet([3, 1, 2], n=5)
    assert s.as_list() == [3, 1, 2]
    assert s == {1, 2, 3}
    assert 1 in s and 4 not in s
    with pytest.raises(InputError):
        s.add(1)
    with pytest.raises(InputError):
        s.add(7)


def test_distributions_normalize():
    d = ElementDistribution({0: 1.0, 3: 3.0})
    assert d[3] == pytest.approx(0.75)
    assert d.support() == [0, 3]
    assert np.allclose(d.to_array(4), [0.25, 0, 0, 0.75])
    with pytest.raises(InputError):
        ElementDistribution({0: -1.0, 1: 2.0})
    with pytest.raises(InputError):
        ElementDistribution({})
    assert ColorWeights.uniform(4).to_array(4).tolist() == [0.25] * 4


def test_evaluation_accounting():
    o = ModularOracle([1.0, 2.0, 3.0, 4.0])
    assert o.value([0, 2]) == 4.0 and o.calls == 1
    assert o.augmented([0], [1, 2, 3]).tolist() == [3.0, 4.0, 5.0]
    assert o.calls == 4
    # a marginal costs two evaluations unless f(S) is supplied
    assert o.marginal(3, [0]) == 4.0 and o.calls == 6
    assert marginal_gain(o, 3, [0], base=1.0) == 4.0 and o.calls == 7
    o.reset_calls()
    assert o.calls == 0


def test_function_oracle_fallback_matches_modular():
    w = np.array([0.5, 1.5, 2.0])
    f = FunctionOracle(3, lambda S: float(sum(w[list(S)])))
    m = ModularOracle(w)
    for S in [(), (0,), (1, 2)]:
        assert f.value(S) == m.value(S)
        assert np.allclose(f.gains(S, [0, 1, 2]), m.gains(S, [0, 1, 2]))
    assert f.calls == m.calls


def test_bad_elements_rejected():
    o = ModularOracle([1.0, 1.0])
    with pytest.raises(InputError):
        o.value([2])
    with pytest.raises(InputError):
        o.augmented([], [-1])


def test_shifted_oracle_charges_base():
    base = ModularOracle([1.0, 2.0, 4.0])
    sh = ShiftedOracle(base, [2])
    assert sh.value([0]) == 5.0
    assert sh.gains([0], [1, 2]).tolist() == [2.0, 0.0]
    assert base.calls == 4 and sh.calls == 4
    inst = MultiObjectiveInstance([base], "m")
    shifted = inst.shifted([2])
    before = inst.calls
    shifted.values([0])
    assert shifted.calls == inst.calls == before + 1


def test_deadline_stops_evaluations():
    o = ModularOracle([1.0])
    o.deadline = time.monotonic() - 1
    with pytest.raises(TimeLimitExceeded):
        o.value([])


def test_min_value_lowest_color_on_ties():
    inst = MultiObjectiveInstance([ModularOracle([1, 0]), ModularOracle([0, 1]), ModularOracle([1, 0])])
    assert min_value(inst, [0]) == (0.0, 1)
    assert min_value(inst, [1]) == (0.0, 0)


def _opt_by_enumeration(inst, B):
    best = 0.0
    for S in itertools.combinations(range(inst.n), min(B, inst.n)):
        best = max(best, min(o.value(S) for o in inst.oracles))
    return best


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10**6), B=st.integers(0, 3))
def test_brute_force_matches_enumeration(seed, B):
    inst = random_cover(7, 2, 0.4, seed)
    S, val = brute_force_opt(inst, B)
    assert len(S) <= B
    assert val == _opt_by_enumeration(inst, B)
    assert min_value(inst, S)[0] == val


def test_brute_force_guard():
    inst = random_cover(40, 1, 0.1, 0)
    with pytest.raises(InputError):
        brute_force_opt(inst, 10, max_subsets=1000)


def test_max_singleton_gain():
    inst = MultiObjectiveInstance([ModularOracle([1, 5]), ModularOracle([7, 2])])
    assert max_singleton_gain(inst) == 7.0
