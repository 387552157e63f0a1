import itertools

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from momax.core import InputError, InstanceError
from momax.objectives import (
    CascadeModel,
    CentralityInstance,
    CoverInstance,
    Graph,
    build_centrality_instance,
    cover_value,
    fair_harmonic_value,
    influence_value,
    load_colored_graph,
    pick_median_degree_target,
    read_edge_list,
    read_probabilities,
    reverse_bfs,
    uncovered_edges,
    write_edge_list,
)

from conftest import random_cover


# -- graphs ----------------------------------------------------------------------


def test_graph_normalizes_edges():
    g = Graph(4, [(2, 1), (1, 2), (3, 3), (0, 1)])
    assert g.edge_set() == {(0, 1), (1, 2)}
    with pytest.raises(InstanceError):
        Graph(3, [(0, 5)])
    d = Graph(3, [(0, 1), (1, 0), (2, 1)], directed=True)
    assert d.m == 3
    assert sorted(d.in_neighbors(1).tolist()) == [0, 2]


def test_edge_list_round_trip(tmp_path):
    g = random_cover(12, 1, 0.3, 0).graphs[0]
    path = tmp_path / "g.txt"
    write_edge_list(g, path)
    h, mapping = read_edge_list(path)
    relabel = {mapping[str(i)]: i for i in range(12) if str(i) in mapping}
    assert {tuple(sorted((relabel[a], relabel[b]))) for a, b in h.edge_set()} == g.edge_set()


def test_colors_and_probabilities_from_files(tmp_path):
    (tmp_path / "e.txt").write_text("# comment\na b\nb c\n")
    (tmp_path / "c.txt").write_text("a red\nb blue\nc red\nd blue\n")
    (tmp_path / "p.txt").write_text("a b 0.25\nb c 0.5\n")
    g, colors, mapping = load_colored_graph(tmp_path / "e.txt", tmp_path / "c.txt", directed=True)
    assert g.n == 4 and g.m == 2
    assert colors.tolist() == [0, 1, 0, 1]
    probs = read_probabilities(tmp_path / "p.txt", mapping, g)
    assert sorted(probs.tolist()) == [0.25, 0.5]


# -- coverage --------------------------------------------------------------------


def test_cover_hand_example():
    g = Graph(4, [(0, 1), (1, 2), (2, 3)])
    inst = CoverInstance([g, Graph(4, [(0, 3)])])
    assert cover_value(inst, 0, [1]) == 2.0
    assert cover_value(inst, 0, [1, 3]) == 3.0
    assert cover_value(inst, 1, [1]) == 0.0
    assert uncovered_edges(g, [1]) == 1
    assert inst.oracles[0].gains([1], [0, 2, 3]).tolist() == [0.0, 1.0, 1.0]


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10**6), data=st.data())
def test_cover_monotone_submodular(seed, data):
    inst = random_cover(12, 1, 0.3, seed)
    o = inst.oracles[0]
    A = data.draw(st.sets(st.integers(0, 11), max_size=5))
    B = A | data.draw(st.sets(st.integers(0, 11), max_size=5))
    v = data.draw(st.integers(0, 11))
    assert o.value(A) <= o.value(B)
    assert o.marginal(v, A) >= o.marginal(v, B)
    assert o.value(A) == o.graph.m - uncovered_edges(o.graph, A)


# -- harmonic centrality ---------------------------------------------------------


def test_reverse_bfs_path():
    g = Graph(3, [(0, 1), (1, 2)], directed=True)
    assert reverse_bfs(g, [2])[0].tolist() == [2.0, 1.0, 0.0]
    iso = Graph(3, [(0, 1)], directed=True)
    d = reverse_bfs(iso, [2])[0]
    assert d[2] == 0 and np.isinf(d[:2]).all()


def test_median_target():
    g = Graph(5, [(0, 1), (0, 2), (0, 3), (1, 2)], directed=True)
    # total degrees 3,2,2,1,0 -> lower median 2
    assert pick_median_degree_target(g) == 1


def _networkx_value(graph, colors, target, F, c):
    G = nx.DiGraph()
    G.add_nodes_from(range(graph.n))
    G.add_edges_from(graph.edges.tolist())
    G.add_edges_from((u, target) for u in F)
    dist = nx.single_source_shortest_path_length(G.reverse(), target)
    members = [w for w in range(graph.n) if colors[w] == c and w != target]
    return sum(1.0 / dist[w] for w in members if w in dist) / len(members)


def random_digraph(rng, n, p):
    mask = rng.random((n, n)) < p
    np.fill_diagonal(mask, False)
    return Graph(n, np.argwhere(mask), directed=True)


@pytest.mark.parametrize("seed", range(10))
def test_harmonic_matches_networkx(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(5, 30))
    g = random_digraph(rng, n, 0.12)
    colors = rng.permutation(np.arange(n) % 3)
    target = pick_median_degree_target(g)
    inst = build_centrality_instance(g, colors, target)
    F = rng.choice(inst.candidates, size=min(3, len(inst.candidates)), replace=False)
    for c in range(3):
        assert fair_harmonic_value(inst, c, F) == pytest.approx(_networkx_value(g, colors, target, F, c), abs=1e-12)


def test_harmonic_rejects_bad_inputs():
    g = Graph(3, [(0, 2)], directed=True)
    inst = CentralityInstance(g, [0, 1, 0], 2)
    assert inst.candidates.tolist() == [1]
    with pytest.raises(InputError):
        fair_harmonic_value(inst, 0, [0])
    with pytest.raises(InstanceError):
        CentralityInstance(g, [0, 0, 1], 2)
    with pytest.raises(InstanceError):
        CentralityInstance(Graph(3, [(0, 2)]), [0, 1, 0], 2)


def test_harmonic_monotone_submodular():
    rng = np.random.default_rng(5)
    g = random_digraph(rng, 25, 0.1)
    inst = build_centrality_instance(g, rng.permutation(np.arange(25) % 2), 0)
    o = inst.oracles[1]
    m = o.n
    for _ in range(20):
        A = set(rng.choice(m, size=2, replace=False).tolist())
        B = A | set(rng.choice(m, size=3, replace=False).tolist())
        v = int(rng.integers(m))
        assert o.value(A) <= o.value(B) + 1e-12
        assert o.marginal(v, A) >= o.marginal(v, B) - 1e-12


# -- influence -------------------------------------------------------------------


def test_influence_closed_forms():
    g = Graph(6, [(0, 1), (1, 2), (3, 4)])
    colors = np.array([0, 0, 1, 1, 1, 0])
    zero = CascadeModel(g, 0.0, m=10, seed=0, colors=colors)
    assert influence_value(zero, 0, [0, 3]) == 1 / 3
    assert influence_value(zero, 1, [0, 3]) == 1 / 3
    one = CascadeModel(g, 1.0, m=10, seed=0, colors=colors)
    # the component {0, 1, 2} is reached in full
    assert influence_value(one, 0, [0]) == 2 / 3
    assert influence_value(one, 1, [0]) == 1 / 3
    assert influence_value(one, 1, [0, 4]) == 1.0


def test_influence_samples_are_fixed():
    g = Graph(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
    a = CascadeModel(g, 0.5, m=50, seed=3)
    b = CascadeModel(g, 0.5, m=50, seed=3)
    assert a.live_edges(7) == b.live_edges(7)
    assert influence_value(a, 0, [2]) == influence_value(b, 0, [2])
    assert a.reached([0], 0).tolist()[0] == 0


def exact_influence(n, arcs, p, S, members):
    """Distribution of the color-normalized reach over all 2^|arcs| outcomes."""
    vals, probs = [], []
    for keep in itertools.product([0, 1], repeat=len(arcs)):
        G = nx.DiGraph()
        G.add_nodes_from(range(n))
        G.add_edges_from(a for a, k in zip(arcs, keep) if k)
        reach = set(S)
        for s in S:
            reach |= nx.descendants(G, s)
        vals.append(len(reach & members) / len(members))
        probs.append(np.prod([p if k else 1 - p for k in keep]))
    vals, probs = np.array(vals), np.array(probs)
    mean = vals @ probs
    return mean, np.sqrt(((vals - mean) ** 2) @ probs)


def test_influence_matches_exhaustive_expectation():
    arcs = [(0, 1), (1, 2), (0, 3), (3, 4), (2, 5), (4, 5)]
    n, p, m = 15, 0.3, 2000
    colors = np.arange(n) % 2
    model = CascadeModel(Graph(n, arcs, directed=True), p, m=m, seed=1, colors=colors)
    for c in range(2):
        members = set(np.flatnonzero(colors == c).tolist())
        mean, sd = exact_influence(n, arcs, p, [0], members)
        assert abs(influence_value(model, c, [0]) - mean) <= 3 * sd / np.sqrt(m)


def test_influence_rejects_bad_inputs():
    g = Graph(3, [(0, 1)])
    with pytest.raises(InstanceError):
        CascadeModel(g, 1.5)
    with pytest.raises(InstanceError):
        CascadeModel(g, 0.5, colors=[0, 2, 2])
