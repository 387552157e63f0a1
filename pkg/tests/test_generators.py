import numpy as np
import pytest

from momax.core import InputError
from momax.generators import (
    GeneratorSpec,
    cover_instance,
    gen_ba,
    gen_er,
    gen_hard_schedule,
    gen_kronecker,
    generate_graphs,
    kronecker_probabilities,
    round_half_up,
)


def rng(seed=0):
    return np.random.default_rng(seed)


def test_er_extremes():
    assert gen_er(10, 0.0, rng()).m == 0
    assert gen_er(10, 1.0, rng()).m == 45
    with pytest.raises(InputError):
        gen_er(10, 1.2, rng())


def test_er_edge_frequency():
    trials = 10_000
    hits = sum(gen_er(3, 0.3, rng(s)).m for s in range(trials))
    # 3 pairs per graph
    mean, sd = 0.3 * 3 * trials, np.sqrt(trials * 3 * 0.3 * 0.7)
    assert abs(hits - mean) <= 3 * sd


def test_ba_edge_count_and_degrees():
    g = gen_ba(64, 5, rng(1))
    assert g.m == 15 + 5 * (64 - 6)
    assert g.m == 305
    assert g.degrees().min() >= 5
    with pytest.raises(InputError):
        gen_ba(5, 5, rng())


def test_kronecker_extremes():
    full = gen_kronecker([[1, 1], [1, 1]], 6, rng())
    assert full.n == 64 and full.m == 64 * 63 // 2
    assert gen_kronecker([[0, 0], [0, 0]], 6, rng()).m == 0


def test_kronecker_probability_is_digit_product():
    P = kronecker_probabilities([[0.9, 0.5], [0.5, 0.1]], 6)
    assert P[0, 1] == pytest.approx(0.9**5 * 0.5)
    assert P[63, 63] == pytest.approx(0.1**6)
    # 5 = 000101, 9 = 001001
    assert P[5, 9] == pytest.approx(0.9**3 * 0.5 * 0.5 * 0.1)


def test_kronecker_empirical_frequency():
    trials = 10_000
    p = 0.9**5 * 0.5
    hits = sum((0, 1) in gen_kronecker([[0.9, 0.5], [0.5, 0.1]], 6, rng(s)).edge_set() for s in range(trials))
    assert abs(hits - p * trials) <= 3 * np.sqrt(trials * p * (1 - p))


def test_hard_schedules():
    er = gen_hard_schedule("er", 3)
    assert [c["p"] for c in er] == pytest.approx([0.12, 0.14, 0.16])
    ba = gen_hard_schedule("ba", 4)
    assert [c["d"] for c in ba] == [6, 6, 7, 7]
    assert round_half_up(5.5) == 6 and round_half_up(6.5) == 7
    with pytest.raises(InputError):
        gen_hard_schedule("kronecker", 2)


def test_spec_validation_and_naming():
    spec = GeneratorSpec("kronecker", power=3)
    assert spec.n == 8
    with pytest.raises(InputError):
        GeneratorSpec("grid")
    with pytest.raises(InputError):
        GeneratorSpec("kronecker", hard=True)
    inst = cover_instance(GeneratorSpec("er", n=12, k=3, seed=4))
    assert inst.name == "er-n12-k3-s4" and inst.k == 3


def test_generation_is_seeded():
    a = generate_graphs(GeneratorSpec("ba", n=20, k=3, d=2, seed=9))
    b = generate_graphs(GeneratorSpec("ba", n=20, k=3, d=2, seed=9))
    assert [g.edge_set() for g in a] == [g.edge_set() for g in b]
    assert a[0].edge_set() != a[1].edge_set()


def test_hard_graphs_use_per_color_parameters():
    graphs = generate_graphs(GeneratorSpec("ba", n=30, k=3, hard=True))
    assert [g.m for g in graphs] == [d * (d + 1) // 2 + d * (30 - d - 1) for d in (6, 6, 7)]
