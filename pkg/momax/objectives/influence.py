"""Fair influence maximization under the independent cascade model.

Influence is estimated on a fixed collection of live-edge samples drawn
once, so the oracle is a deterministic coverage function: ``f_c(S)`` is the
fraction of color ``c`` reached from ``S``, averaged over samples.
"""
import logging
from typing import Dict, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np

from . import edge_array
from .. import FoldingOracle, MultiObjectiveInstance
from ..const import DEFAULT_INFLUENCE_SAMPLES, REACH_MEMORY_BUDGET
from ..exceptions import InputError, InstanceError

_LOGGER = logging.getLogger(__name__)

EdgeProbabilities = Union[float, Dict[Tuple[int, int], float]]


def _reach_closure(live: nx.DiGraph, n: int) -> np.ndarray:
    """Packed bitsets of the nodes reachable from every node (itself included)."""
    dag = nx.condensation(live)
    component = dag.graph["mapping"]
    reach = np.zeros((dag.number_of_nodes(), (n + 7) // 8), dtype=np.uint8)
    for scc in reversed(list(nx.topological_sort(dag))):
        bits = np.zeros(n, dtype=bool)
        bits[list(dag.nodes[scc]["members"])] = True
        reach[scc] = np.packbits(bits)
        for successor in dag.successors(scc):
            reach[scc] |= reach[successor]
    return reach[[component[v] for v in range(n)]]


class CascadeModel:
    """Live-edge samples of a graph and their reachability closures."""

    def __init__(
        self,
        graph: nx.Graph,
        color_map: Sequence[int],
        edge_prob: EdgeProbabilities,
        samples: int = DEFAULT_INFLUENCE_SAMPLES,
        seed: Optional[int] = None,
        memory_budget: int = REACH_MEMORY_BUDGET,
    ):
        """Init."""
        if samples < 1:
            raise InputError(f"need at least one sample, got {samples}")
        graph = graph if graph.is_directed() else graph.to_directed()
        n = graph.number_of_nodes()
        self.n = n
        self.samples = samples
        self.color_map = np.asarray(color_map, dtype=np.intp)
        if self.color_map.shape != (n,):
            raise InstanceError(f"color map has {self.color_map.size} entries for {n} nodes")
        k = int(self.color_map.max()) + 1
        self.color_sizes = np.bincount(self.color_map, minlength=k)
        if (self.color_sizes == 0).any():
            raise InstanceError(f"colors {np.flatnonzero(self.color_sizes == 0)} are empty")
        self.color_masks = np.stack(
            [np.packbits(self.color_map == c) for c in range(k)]
        )

        size = samples * n * self.color_masks.shape[1]
        if size > memory_budget:
            raise InstanceError(
                f"{samples} samples of {n}-node reach sets need {size} bytes, "
                f"over the budget of {memory_budget}"
            )

        edges = edge_array(graph)
        self.probabilities = self._edge_probabilities(edges, edge_prob)
        rng = np.random.default_rng(seed)
        self.reach = np.empty((samples, n, self.color_masks.shape[1]), dtype=np.uint8)
        for s in range(samples):
            keep = rng.random(len(edges)) < self.probabilities
            live = nx.DiGraph()
            live.add_nodes_from(range(n))
            live.add_edges_from(map(tuple, edges[keep]))
            self.reach[s] = _reach_closure(live, n)
        _LOGGER.debug("sampled %d live-edge graphs of %d edges", samples, len(edges))

    @staticmethod
    def _edge_probabilities(edges: np.ndarray, edge_prob: EdgeProbabilities) -> np.ndarray:
        if isinstance(edge_prob, dict):
            probs = np.array([edge_prob.get((int(u), int(v)), 0.0) for u, v in edges])
        else:
            probs = np.full(len(edges), float(edge_prob))
        if ((probs < 0) | (probs > 1)).any():
            raise InputError("edge probabilities must lie in [0, 1]")
        return probs

    @property
    def k(self) -> int:
        """Number of colors."""
        return self.color_masks.shape[0]

    def initial_state(self) -> np.ndarray:
        """No node activated in any sample."""
        return np.zeros((self.samples, self.color_masks.shape[1]), dtype=np.uint8)

    def activate(self, state: np.ndarray, v: int) -> np.ndarray:
        """State with everything reachable from ``v`` activated."""
        return state | self.reach[:, v, :]

    def coverage(self, state: np.ndarray, c: int) -> float:
        """Mean fraction of color ``c`` activated."""
        hits = np.unpackbits(state & self.color_masks[c]).sum()
        return float(hits / (self.samples * self.color_sizes[c]))


class InfluenceOracle(FoldingOracle):
    """Expected activated fraction of one color."""

    def __init__(self, model: CascadeModel, color: int, name: str = ""):
        """Init."""
        self.model = model
        self.color = color
        super().__init__(model.n, name)

    def _initial_state(self):
        return self.model.initial_state()

    def _fold(self, state, v):
        return self.model.activate(state, v)

    def _score(self, state):
        return self.model.coverage(state, self.color)


class InfluenceInstance(MultiObjectiveInstance):
    """One influence oracle per color over a shared cascade model."""

    def __init__(self, model: CascadeModel, name: str = "influence"):
        """Init."""
        self.model = model
        super().__init__(
            [InfluenceOracle(model, c, f"{name}[{c}]") for c in range(model.k)], name
        )


def build_cascade_model(
    graph: nx.Graph,
    color_map: Sequence[int],
    edge_prob: EdgeProbabilities,
    samples: int = DEFAULT_INFLUENCE_SAMPLES,
    seed: Optional[int] = None,
) -> CascadeModel:
    """Sample ``samples`` live-edge graphs, keeping each edge independently."""
    return CascadeModel(graph, color_map, edge_prob, samples, seed)


def influence_value(model: CascadeModel, c: int, subset) -> float:
    """Sampled influence of ``subset`` on color ``c``; no evaluation counted."""
    state = model.initial_state()
    for v in map(int, subset):
        if not 0 <= v < model.n:
            raise InputError(f"element {v} outside 0..{model.n - 1}")
        state = model.activate(state, v)
    return model.coverage(state, c)
