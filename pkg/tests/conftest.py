"""Fixtures for all tests."""
import networkx as nx
import numpy as np
import pytest

from momax.objectives.centrality import build_centrality_instance
from momax.objectives.coverage import CoverInstance

from tests.common import modular_instance, random_cover


def pytest_addoption(parser):
    """Add the switch for experiment replications."""
    parser.addoption(
        "--runslow", action="store_true", default=False, help="run slow tests"
    )


def pytest_collection_modifyitems(config, items):
    """Skip slow tests unless asked for."""
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(name="path_graphs")
def path_graphs_fixture():
    """Two colors on nodes 0..3: path 0-1-2 and edge 2-3."""
    first = nx.Graph([(0, 1), (1, 2)])
    second = nx.Graph([(2, 3)])
    second.add_nodes_from(range(4))
    return [first, second]


@pytest.fixture(name="path_cover")
def path_cover_fixture(path_graphs):
    """Cover instance of the two path graphs."""
    return CoverInstance(path_graphs, "paths")


@pytest.fixture(name="small_cover")
def small_cover_fixture():
    """Three ER graphs on ten nodes."""
    return random_cover(10, 3, 0.3, seed=7, name="er10")


@pytest.fixture(name="single_cover")
def single_cover_fixture():
    """One ER graph on thirty nodes."""
    return random_cover(30, 1, 0.2, seed=3, name="er30")


@pytest.fixture(name="modular")
def modular_fixture():
    """Two modular colors favoring different elements."""
    return modular_instance([[5.0, 1.0, 0.0, 2.0], [0.0, 1.0, 4.0, 3.0]])


@pytest.fixture(name="rng")
def rng_fixture():
    """Seeded generator."""
    return np.random.default_rng(2024)


@pytest.fixture(name="path_digraph")
def path_digraph_fixture():
    """Directed path 0 -> 1 -> 2."""
    graph = nx.DiGraph([(0, 1), (1, 2)])
    return graph


@pytest.fixture(name="random_centrality")
def random_centrality_fixture():
    """Centrality instance of a random digraph on 12 nodes with two colors."""
    graph = nx.gnp_random_graph(12, 0.2, seed=11, directed=True)
    color_map = np.array([v % 2 for v in range(12)])
    return build_centrality_instance(graph, color_map, target=0), graph, color_map
