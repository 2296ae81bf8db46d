"""Fair harmonic centrality of a target node under edge insertions.

Elements are the candidate sources ``u`` of a new edge ``(u, target)``.
For color ``c`` the value is the mean over ``w ∈ V_c \\ {target}`` of
``1/d(w, target)`` after insertion, with ``1/∞ = 0``. Inserted edges all
head to the target, so a shortest path uses at most one of them and only as
its last hop; hence ``d_new(w) = min(d(w, target), min_u d(w, u) + 1)``.
"""
from functools import lru_cache
import logging
from typing import Optional, Sequence

import networkx as nx
import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from .. import FoldingOracle, MultiObjectiveInstance
from ..const import DISTANCE_MEMORY_BUDGET
from ..exceptions import InputError, InstanceError

_LOGGER = logging.getLogger(__name__)

# cached rows of on-demand candidate distances
ROW_CACHE_SIZE = 4096


def _reverse_adjacency(graph: nx.DiGraph, n: int) -> sparse.csr_matrix:
    edges = np.array(list(graph.edges()), dtype=np.intp).reshape(-1, 2)
    # an edge a->b becomes b->a, so BFS from u yields d(w, u)
    return sparse.csr_matrix(
        (np.ones(len(edges)), (edges[:, 1], edges[:, 0])), shape=(n, n)
    )


class CentralityInstance(MultiObjectiveInstance):
    """Edge-insertion instance for fair harmonic centrality of ``target``.

    Distances are integers stored with ``unreachable = n + 1``.
    ``cand_dist[i]`` already holds ``d(·, candidates[i]) + 1``. When the
    full matrix would exceed ``memory_budget`` entries, rows are computed
    on demand and kept in an LRU cache.
    """

    def __init__(
        self,
        graph: nx.Graph,
        color_map: Sequence[int],
        target: int,
        name: str = "centrality",
        memory_budget: int = DISTANCE_MEMORY_BUDGET,
    ):
        """Init."""
        graph = graph if graph.is_directed() else graph.to_directed()
        n = graph.number_of_nodes()
        if not 0 <= target < n:
            raise InputError(f"target {target} not in graph of {n} nodes")
        self.graph = graph
        self.target = target
        self.color_map = np.asarray(color_map, dtype=np.intp)
        if self.color_map.shape != (n,):
            raise InstanceError(f"color map has {self.color_map.size} entries for {n} nodes")
        self.unreachable = n + 1
        self.dtype = np.uint16 if self.unreachable < np.iinfo(np.uint16).max else np.uint32

        k = int(self.color_map.max()) + 1
        self.members = []
        for c in range(k):
            nodes = np.flatnonzero((self.color_map == c) & (np.arange(n) != target))
            if not nodes.size:
                raise InstanceError(f"color {c} has no members besides the target {target}")
            self.members.append(nodes)
        self.color_sizes = np.array([nodes.size for nodes in self.members])

        in_neighbors = set(graph.predecessors(target))
        self.candidates = np.array(
            [u for u in range(n) if u != target and u not in in_neighbors], dtype=np.intp
        )
        if not self.candidates.size:
            raise InstanceError(f"target {target} already has every possible in-edge")

        self._reverse = _reverse_adjacency(graph, n)
        self.base_dist = self._distances([target])[0]
        self.reciprocal = np.zeros(self.unreachable + 1)
        self.reciprocal[1 : self.unreachable] = 1.0 / np.arange(1, self.unreachable)

        self.on_demand = self.candidates.size * n > memory_budget
        if self.on_demand:
            _LOGGER.info(
                "%s: %d×%d distances exceed the budget, computing rows on demand",
                name,
                self.candidates.size,
                n,
            )
            self.cand_dist = None
            self._row = lru_cache(maxsize=ROW_CACHE_SIZE)(self._compute_row)
        else:
            self.cand_dist = self._shifted(self._distances(self.candidates))
            self._row = self.cand_dist.__getitem__

        super().__init__(
            [FairHarmonicOracle(self, c, f"{name}[{c}]") for c in range(k)], name
        )

    def _distances(self, sources) -> np.ndarray:
        dist = csgraph.shortest_path(
            self._reverse, directed=True, unweighted=True, indices=np.asarray(sources)
        )
        dist = np.atleast_2d(dist)
        dist[~np.isfinite(dist)] = self.unreachable
        return dist.astype(self.dtype)

    def _shifted(self, dist: np.ndarray) -> np.ndarray:
        return np.where(dist == self.unreachable, dist, dist + 1).astype(self.dtype)

    def _compute_row(self, index: int) -> np.ndarray:
        return self._shifted(self._distances([self.candidates[index]]))[0]

    def row(self, index: int) -> np.ndarray:
        """``d(·, candidates[index]) + 1`` over all nodes."""
        return self._row(index)

    def element_of(self, source: int) -> int:
        """Element index of candidate node ``source``."""
        position = np.searchsorted(self.candidates, source)
        if position >= self.candidates.size or self.candidates[position] != source:
            raise InputError(f"node {source} is not a candidate source for {self.target}")
        return int(position)

    def sources(self, elements) -> np.ndarray:
        """Candidate nodes of element indices."""
        return self.candidates[np.asarray(list(elements), dtype=np.intp)]


class FairHarmonicOracle(FoldingOracle):
    """Population-normalized harmonic centrality of the target for one color."""

    def __init__(self, instance: CentralityInstance, color: int, name: str = ""):
        """Init."""
        self.instance = instance
        self.color = color
        self.nodes = instance.members[color]
        super().__init__(instance.candidates.size, name)

    def _initial_state(self):
        return self.instance.base_dist[self.nodes]

    def _fold(self, state, v):
        return np.minimum(state, self.instance.row(v)[self.nodes])

    def _score(self, state):
        return float(self.instance.reciprocal[state].sum() / self.nodes.size)


def build_centrality_instance(
    graph: nx.Graph,
    color_map: Sequence[int],
    target: Optional[int] = None,
    name: str = "centrality",
    memory_budget: int = DISTANCE_MEMORY_BUDGET,
) -> CentralityInstance:
    """Centrality instance for ``target``, by default a median-degree node."""
    if target is None:
        target = pick_median_degree_target(graph)
    return CentralityInstance(graph, color_map, target, name, memory_budget)


def fair_harmonic_value(instance: CentralityInstance, c: int, sources) -> float:
    """``f_c`` of the candidate nodes ``sources``; one evaluation."""
    elements = [instance.element_of(int(u)) for u in sources]
    return instance.oracles[c].value(elements)


def pick_median_degree_target(graph: nx.Graph) -> int:
    """Lowest-index node whose total degree is the lower median degree."""
    if graph.number_of_nodes() < 1:
        raise InputError("graph has no nodes")
    nodes = sorted(graph.nodes)
    degrees = np.array([graph.degree(v) for v in nodes])
    median = np.sort(degrees)[(len(degrees) - 1) // 2]
    return int(nodes[int(np.flatnonzero(degrees == median)[0])])
