"""Test doubles and reference computations shared by the tests."""
from collections import deque
import itertools

import networkx as nx
import numpy as np

from momax import MultiObjectiveInstance, SubmodularOracle
from momax.exceptions import TimeLimitExceeded
from momax.generators import gen_er
from momax.objectives.coverage import CoverInstance


class ModularOracle(SubmodularOracle):
    """Additive weights; records every raw evaluation."""

    def __init__(self, weights, name=""):
        """Init."""
        self.weights = np.asarray(weights, dtype=float)
        self.evaluated = []
        super().__init__(self.weights.size, name)
        self.evaluated.clear()

    def _evaluate(self, members):
        self.evaluated.append(tuple(members))
        return float(self.weights[list(members)].sum()) if members else 0.0


class OffsetOracle(ModularOracle):
    """Modular oracle with a constant ``f(∅)``."""

    def __init__(self, weights, offset, name=""):
        """Init."""
        self.offset = offset
        super().__init__(weights, name)

    def _evaluate(self, members):
        return super()._evaluate(members) + self.offset


class StoppingOracle(ModularOracle):
    """Modular oracle whose clones run out of time after ``limit`` evaluations."""

    def __init__(self, weights, limit, name=""):
        """Init."""
        self.limit = limit
        self.cloned = False
        super().__init__(weights, name)

    def value(self, subset):
        if self.cloned and self.calls >= self.limit:
            raise TimeLimitExceeded(f"{self.name}: out of evaluations")
        return super().value(subset)

    def clone(self):
        twin = super().clone()
        twin.cloned = True
        return twin


def modular_instance(rows, name="modular"):
    """One modular oracle per row of weights."""
    oracles = [ModularOracle(row, f"{name}[{c}]") for c, row in enumerate(rows)]
    return MultiObjectiveInstance(oracles, name)


def random_cover(n, k, p, seed, name="cover"):
    """``k`` ER graphs on ``n`` nodes from one seed."""
    rng = np.random.default_rng(seed)
    return CoverInstance([gen_er(n, p, rng) for _ in range(k)], name)


def edge_scan(graph, subset):
    """Edges of ``graph`` touching ``subset``, by direct enumeration."""
    members = set(subset)
    return sum(1 for u, v in graph.edges() if u in members or v in members)


def exhaustive_opt(instance, budget):
    """Maximum of the minimum value over all sets of size ``budget``, largest first."""
    best = -np.inf
    for combo in itertools.combinations(range(instance.n - 1, -1, -1), budget):
        values = [oracle._evaluate(tuple(sorted(combo))) for oracle in instance.oracles]
        best = max(best, min(values))
    return best


def bfs_to(graph, target):
    """Distances from every node to ``target`` by BFS over in-edges."""
    dist = {target: 0}
    queue = deque([target])
    while queue:
        v = queue.popleft()
        for u in graph.predecessors(v):
            if u not in dist:
                dist[u] = dist[v] + 1
                queue.append(u)
    return dist


def rebuilt_harmonic(graph, color_map, target, color, sources):
    """Fair harmonic centrality after inserting ``(u, target)`` for ``sources``."""
    rebuilt = nx.DiGraph(graph)
    rebuilt.add_edges_from((u, target) for u in sources)
    dist = bfs_to(rebuilt, target)
    nodes = [w for w in range(len(color_map)) if color_map[w] == color and w != target]
    total = sum(1.0 / dist[w] for w in nodes if w in dist)
    return total / len(nodes)


def reached(graph, sources):
    """Nodes reachable from ``sources`` in a directed graph."""
    seen = set(sources)
    for s in sources:
        seen |= nx.descendants(graph, s)
    return seen


def random_chain(n, rng, length=None):
    """A random insertion order of distinct elements."""
    order = rng.permutation(n)
    return [int(v) for v in order[: length or n]]
