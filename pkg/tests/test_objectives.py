"""Tests for coverage, fair harmonic centrality, fair influence and graph files."""
import itertools

import networkx as nx
import numpy as np
import pytest

from momax import ElementSet, marginal_gain
from momax.exceptions import InputError, InstanceError
from momax.generators import gen_er
from momax.objectives import (
    align,
    edge_array,
    read_color_file,
    read_edge_list,
    read_probability_file,
    write_edge_list,
)
from momax.objectives.centrality import (
    build_centrality_instance,
    fair_harmonic_value,
    pick_median_degree_target,
)
from momax.objectives.coverage import CoverInstance, CoverOracle, cover_value
from momax.objectives.influence import (
    InfluenceInstance,
    build_cascade_model,
    influence_value,
)

from tests.common import edge_scan, random_chain, rebuilt_harmonic, reached


def _spot_check(instance, rng, triples=50):
    for _ in range(triples):
        oracle = instance.oracles[int(rng.integers(instance.k))]
        chain = random_chain(instance.n, rng)
        small = int(rng.integers(0, instance.n - 1))
        large = int(rng.integers(small, instance.n - 1))
        v = chain[-1]
        s, t = ElementSet(chain[:small]), ElementSet(chain[:large])
        assert oracle.value(s) <= oracle.value(t) + 1e-9
        assert marginal_gain(oracle, v, s) >= marginal_gain(oracle, v, t) - 1e-9


def test_cover_empty(path_cover):
    """Test the empty set covers nothing."""
    assert cover_value(path_cover, 0, ElementSet()) == 0.0


def test_cover_path_middle(path_cover):
    """Test the middle of a path covers both edges."""
    assert cover_value(path_cover, 0, ElementSet([1])) == 2.0
    assert cover_value(path_cover, 1, ElementSet([1])) == 0.0


@pytest.mark.parametrize("seed", range(5))
def test_cover_matches_edge_scan(seed):
    """Test coverage against direct edge enumeration."""
    rng = np.random.default_rng(seed)
    graph = gen_er(8, 0.3, rng)
    instance = CoverInstance([graph])
    oracle = instance.oracles[0]
    for _ in range(10):
        subset = random_chain(8, rng)[: int(rng.integers(0, 9))]
        assert oracle.value(subset) == edge_scan(graph, subset)
        assert oracle.value(subset) + oracle.uncovered(subset) == oracle.edge_count


def test_cover_rejects_outside_endpoint():
    """Test edges must stay inside the universe."""
    with pytest.raises(InstanceError):
        CoverOracle(nx.Graph([(0, 5)]), 3)


def test_cover_instance_spans_all_graphs(path_graphs):
    """Test the universe covers the largest node index."""
    instance = CoverInstance(path_graphs)
    assert instance.n == 4
    assert instance.oracles[1].edge_count == 1


@pytest.mark.parametrize("seed", range(4))
def test_cover_monotone_submodular(seed):
    """Test the spot checks on coverage."""
    rng = np.random.default_rng(seed)
    instance = CoverInstance([gen_er(12, 0.3, rng) for _ in range(2)])
    _spot_check(instance, rng)


def test_read_edge_list(tmp_path):
    """Test comments, self-loops, duplicates and the node mapping."""
    path = tmp_path / "edges.txt"
    path.write_text("# comment\nb a\na c\nc c\nb a\n")
    graph, mapping = read_edge_list(path)
    assert mapping == {"b": 0, "a": 1, "c": 2}
    assert sorted(map(sorted, graph.edges())) == [[0, 1], [1, 2]]
    assert graph.number_of_nodes() == 3


def test_read_edge_list_shared_mapping(tmp_path):
    """Test several files share one mapping."""
    first, second = tmp_path / "first.txt", tmp_path / "second.txt"
    first.write_text("x y\n")
    second.write_text("z x\n")
    mapping = {}
    graphs = [read_edge_list(path, mapping=mapping)[0] for path in (first, second)]
    align(graphs, len(mapping))
    assert mapping == {"x": 0, "y": 1, "z": 2}
    assert all(graph.number_of_nodes() == 3 for graph in graphs)


def test_read_edge_list_missing(tmp_path):
    """Test a missing file."""
    with pytest.raises(InstanceError):
        read_edge_list(tmp_path / "missing.txt")


def test_read_color_file(tmp_path):
    """Test labels map to colors in order of first appearance."""
    path = tmp_path / "colors.txt"
    path.write_text("a red\n# skip\nb blue\nc red\n")
    color_map, labels = read_color_file(path, {"a": 0, "b": 1, "c": 2})
    assert color_map.tolist() == [0, 1, 0]
    assert labels == {"red": 0, "blue": 1}


def test_read_color_file_errors(tmp_path):
    """Test unknown and uncolored nodes."""
    path = tmp_path / "colors.txt"
    path.write_text("a red\nq blue\n")
    with pytest.raises(InstanceError):
        read_color_file(path, {"a": 0})
    path.write_text("a red\n")
    with pytest.raises(InstanceError):
        read_color_file(path, {"a": 0, "b": 1})
    path.write_text("a red extra\n")
    with pytest.raises(InstanceError):
        read_color_file(path, {"a": 0})


def test_read_probability_file(tmp_path):
    """Test per-edge probabilities and their range."""
    path = tmp_path / "probs.txt"
    path.write_text("a b 0.25\nb a 1.0\n")
    probs = read_probability_file(path, {"a": 0, "b": 1})
    assert probs == {(0, 1): 0.25, (1, 0): 1.0}
    path.write_text("a b 1.5\n")
    with pytest.raises(InstanceError):
        read_probability_file(path, {"a": 0, "b": 1})


def test_write_edge_list_round_trip(tmp_path):
    """Test written edge lists read back to the same graph."""
    graph = gen_er(10, 0.4, np.random.default_rng(1))
    path = tmp_path / "er.txt"
    write_edge_list(graph, path)
    read, mapping = read_edge_list(path)
    relabeled = nx.relabel_nodes(read, {i: int(label) for label, i in mapping.items()})
    assert sorted(map(tuple, edge_array(relabeled))) == sorted(map(tuple, edge_array(graph)))


def test_centrality_path(path_digraph):
    """Test the path 0 -> 1 -> 2 with target 2."""
    instance = build_centrality_instance(path_digraph, [0, 0, 0], target=2)
    assert instance.base_dist.tolist() == [2, 1, 0]
    assert instance.candidates.tolist() == [0]
    assert fair_harmonic_value(instance, 0, []) == pytest.approx(0.75)
    assert fair_harmonic_value(instance, 0, [0]) == pytest.approx(1.0)


def test_centrality_isolated_target():
    """Test an isolated target is unreachable from everything else."""
    graph = nx.DiGraph([(0, 1), (1, 2)])
    graph.add_node(3)
    instance = build_centrality_instance(graph, [0, 0, 0, 0], target=3)
    assert instance.base_dist.tolist() == [5, 5, 5, 0]
    assert fair_harmonic_value(instance, 0, []) == 0.0
    assert fair_harmonic_value(instance, 0, [2]) == pytest.approx((1 / 3 + 1 / 2 + 1) / 3)


def test_centrality_candidates(random_centrality):
    """Test candidates exclude the target and its in-neighbors."""
    instance, graph, _ = random_centrality
    excluded = set(graph.predecessors(0)) | {0}
    assert not excluded & set(instance.candidates.tolist())
    assert set(instance.candidates.tolist()) | excluded == set(range(12))
    with pytest.raises(InputError):
        fair_harmonic_value(instance, 0, [0])


def test_centrality_matches_rebuild(random_centrality):
    """Test values against inserting the edges and running BFS again."""
    instance, graph, color_map = random_centrality
    rng = np.random.default_rng(0)
    candidates = instance.candidates.tolist()
    for _ in range(20):
        size = int(rng.integers(0, len(candidates) + 1))
        sources = [int(u) for u in rng.choice(candidates, size=size, replace=False)]
        for c in range(instance.k):
            expected = rebuilt_harmonic(graph, color_map, 0, c, sources)
            assert fair_harmonic_value(instance, c, sources) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("seed", range(20))
def test_centrality_random_graphs(seed):
    """Test rebuild agreement on random digraphs of up to 50 nodes."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(6, 51))
    graph = nx.gnp_random_graph(n, 3 / n, seed=seed, directed=True)
    color_map = np.arange(n) % 3
    target = pick_median_degree_target(graph)
    instance = build_centrality_instance(graph, color_map, target)
    candidates = instance.candidates.tolist()
    for _ in range(5):
        size = int(rng.integers(0, min(len(candidates), 6) + 1))
        sources = [int(u) for u in rng.choice(candidates, size=size, replace=False)]
        for c in range(instance.k):
            expected = rebuilt_harmonic(graph, color_map, target, c, sources)
            assert fair_harmonic_value(instance, c, sources) == pytest.approx(expected, abs=1e-12)


def test_centrality_on_demand_rows(random_centrality):
    """Test rows computed on demand give the same values."""
    instance, graph, color_map = random_centrality
    lazy = build_centrality_instance(graph, color_map, 0, memory_budget=1)
    assert lazy.on_demand and not instance.on_demand
    for index in range(instance.candidates.size):
        assert lazy.row(index).tolist() == instance.row(index).tolist()
    elements = list(range(min(3, instance.candidates.size)))
    assert lazy.values(elements).tolist() == instance.values(elements).tolist()


def test_centrality_color_only_target():
    """Test a color whose only member is the target."""
    graph = nx.DiGraph([(0, 1), (1, 2)])
    with pytest.raises(InstanceError):
        build_centrality_instance(graph, [0, 0, 1], target=2)


def test_centrality_monotone_submodular(random_centrality):
    """Test the spot checks on centrality."""
    instance, _, _ = random_centrality
    _spot_check(instance, np.random.default_rng(5), triples=200)


def test_median_target_regular():
    """Test a regular graph picks node 0."""
    assert pick_median_degree_target(nx.cycle_graph(7)) == 0


def test_median_target_star():
    """Test a star picks a leaf."""
    assert pick_median_degree_target(nx.star_graph(4)) == 1


def test_median_target_directed():
    """Test directed graphs use the total degree."""
    graph = nx.DiGraph([(0, 1), (0, 2), (0, 3), (1, 2)])
    assert pick_median_degree_target(graph) == 1


def _toy_graph():
    graph = nx.Graph([(0, 1), (1, 2), (2, 3), (3, 4)])
    graph.add_node(5)
    return graph


def test_influence_zero_probability():
    """Test no live edges gives the seeds' share of each color."""
    model = build_cascade_model(_toy_graph(), [0, 0, 1, 1, 1, 0], 0.0, samples=5, seed=1)
    assert influence_value(model, 0, [0, 2]) == pytest.approx(1 / 3)
    assert influence_value(model, 1, [0, 2]) == pytest.approx(1 / 3)


def test_influence_full_probability():
    """Test every edge live gives reachability in the graph."""
    graph = _toy_graph()
    model = build_cascade_model(graph, [0, 0, 1, 1, 1, 0], 1.0, samples=3, seed=1)
    assert influence_value(model, 0, [3]) == pytest.approx(2 / 3)
    assert influence_value(model, 1, [3]) == pytest.approx(1.0)
    assert influence_value(model, 0, [5]) == pytest.approx(1 / 3)


def test_influence_extremes():
    """Test the empty set and the whole universe."""
    model = build_cascade_model(_toy_graph(), [0, 1, 0, 1, 0, 1], 0.4, samples=20, seed=3)
    assert influence_value(model, 0, []) == 0.0
    assert influence_value(model, 1, range(6)) == pytest.approx(1.0)


def test_influence_matches_per_sample_reach():
    """Test the estimate against reachability recomputed per live-edge sample."""
    graph = nx.gnp_random_graph(9, 0.3, seed=4, directed=True)
    color_map = [0, 1, 2] * 3
    model = build_cascade_model(graph, color_map, 0.5, samples=30, seed=8)
    edges = edge_array(graph)
    rng = np.random.default_rng(8)
    hits = np.zeros(3)
    for _ in range(30):
        keep = rng.random(len(edges)) < 0.5
        live = nx.DiGraph()
        live.add_nodes_from(range(9))
        live.add_edges_from(map(tuple, edges[keep]))
        for v in reached(live, [0, 4]):
            hits[color_map[v]] += 1
    for c in range(3):
        assert influence_value(model, c, [0, 4]) == pytest.approx(hits[c] / (30 * 3))


def test_influence_exhaustive_outcomes():
    """Test a sampled estimate against all live-edge outcomes of a tiny graph."""
    graph = nx.Graph([(0, 1), (1, 2), (0, 3)])
    color_map = [0, 0, 0, 0]
    directed = edge_array(graph.to_directed())
    p = 0.3
    fractions, weights = [], []
    for outcome in itertools.product([False, True], repeat=len(directed)):
        live = nx.DiGraph()
        live.add_nodes_from(range(4))
        live.add_edges_from(map(tuple, directed[list(outcome)]))
        fractions.append(len(reached(live, [1])) / 4)
        weights.append(np.prod([p if kept else 1 - p for kept in outcome]))
    fractions, weights = np.array(fractions), np.array(weights)
    mean = float(weights @ fractions)
    stderr = np.sqrt(float(weights @ (fractions - mean) ** 2) / 2000)

    model = build_cascade_model(graph, color_map, p, samples=2000, seed=12)
    assert abs(influence_value(model, 0, [1]) - mean) <= 4 * stderr


def test_influence_per_edge_probabilities():
    """Test a probability map switches single edges on and off."""
    graph = nx.DiGraph([(0, 1), (1, 2)])
    model = build_cascade_model(graph, [0, 0, 0], {(0, 1): 1.0}, samples=4, seed=0)
    assert influence_value(model, 0, [0]) == pytest.approx(2 / 3)


def test_influence_errors():
    """Test empty colors, bad probabilities and the memory budget."""
    graph = nx.path_graph(3)
    with pytest.raises(InstanceError):
        build_cascade_model(graph, [0, 0, 2], 0.1, samples=2)
    with pytest.raises(InputError):
        build_cascade_model(graph, [0, 0, 0], 1.5, samples=2)
    with pytest.raises(InputError):
        build_cascade_model(graph, [0, 0, 0], 0.1, samples=0)
    with pytest.raises(InputError):
        influence_value(build_cascade_model(graph, [0, 0, 0], 0.1, samples=1), 0, [3])


def test_influence_instance_submodular():
    """Test the spot checks and non-increasing marginals along a chain."""
    graph = nx.gnp_random_graph(14, 0.2, seed=2, directed=True)
    model = build_cascade_model(graph, [v % 2 for v in range(14)], 0.3, samples=50, seed=2)
    instance = InfluenceInstance(model)
    rng = np.random.default_rng(2)
    _spot_check(instance, rng, triples=200)
    oracle = instance.oracles[0]
    chain = random_chain(14, rng)
    v = chain.pop()
    gains = [marginal_gain(oracle, v, ElementSet(chain[:size])) for size in range(13)]
    assert all(a >= b - 1e-12 for a, b in zip(gains, gains[1:]))
