"""Multi-graph coverage: ``f_c(U)`` counts the edges of ``G_c`` touching ``U``."""
import logging
from typing import Sequence

import networkx as nx
import numpy as np
from scipy import sparse

from . import edge_array
from .. import FoldingOracle, MultiObjectiveInstance
from ..exceptions import InstanceError

_LOGGER = logging.getLogger(__name__)


class CoverOracle(FoldingOracle):
    """Number of edges with at least one endpoint in the set."""

    def __init__(self, graph: nx.Graph, n: int, name: str = "cover"):
        """Init."""
        self.edges = edge_array(graph)
        m = len(self.edges)
        if m and self.edges.max() >= n:
            raise InstanceError(f"{name}: edge endpoint outside 0..{n - 1}")
        rows = self.edges.ravel()
        cols = np.repeat(np.arange(m), 2)
        self._incidence = sparse.csr_matrix(
            (np.ones(2 * m, dtype=bool), (rows, cols)), shape=(n, m)
        )
        super().__init__(n, name)

    @property
    def edge_count(self) -> int:
        """``|E_c|``."""
        return len(self.edges)

    def incident(self, v: int) -> np.ndarray:
        """Indices of the edges touching ``v``."""
        start, stop = self._incidence.indptr[v], self._incidence.indptr[v + 1]
        return self._incidence.indices[start:stop]

    def _initial_state(self):
        return np.zeros(self.edge_count, dtype=bool)

    def _fold(self, state, v):
        state = state.copy()
        state[self.incident(v)] = True
        return state

    def _score(self, state):
        return float(state.sum())

    def uncovered(self, subset) -> int:
        """Edges not touching ``subset``; uncounted."""
        return self.edge_count - int(self._score(self._state_of(list(subset))))


class CoverInstance(MultiObjectiveInstance):
    """One undirected graph per color on a shared node set."""

    def __init__(self, graphs: Sequence[nx.Graph], name: str = "cover"):
        """Init."""
        if not graphs:
            raise InstanceError("a cover instance needs at least one graph")
        n = max(max(graph.nodes, default=-1) + 1 for graph in graphs)
        if n == 0:
            raise InstanceError("cover graphs have no nodes")
        self.graphs = list(graphs)
        super().__init__(
            [CoverOracle(graph, n, f"{name}[{c}]") for c, graph in enumerate(graphs)],
            name,
        )


def cover_value(instance: CoverInstance, c: int, subset) -> float:
    """``f_c(subset)``; one evaluation."""
    return instance.oracles[c].value(subset)
