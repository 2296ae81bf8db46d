"""Objective families and the graph files they are built from.

Edge lists hold one ``u v`` pair per line, color files one
``node_id color_label`` pair, probability files ``u v p`` triples. Lines
starting with ``#`` are comments. Node ids are remapped to dense indices
in order of first appearance, shared across every file read with the same
mapping.
"""
import logging
from typing import Dict, List, Optional, Tuple

import networkx as nx
import numpy as np

from ..exceptions import InstanceError

_LOGGER = logging.getLogger(__name__)

NodeMapping = Dict[str, int]


def _index(mapping: NodeMapping, label: str) -> int:
    if label not in mapping:
        mapping[label] = len(mapping)
    return mapping[label]


def read_edge_list(
    path, directed: bool = False, mapping: Optional[NodeMapping] = None
) -> Tuple[nx.Graph, NodeMapping]:
    """Read an edge list into a simple graph on dense node indices.

    Self-loops are dropped and duplicate edges collapse.
    """
    mapping = {} if mapping is None else mapping
    try:
        raw = nx.read_edgelist(
            path,
            comments="#",
            nodetype=str,
            data=False,
            create_using=nx.DiGraph if directed else nx.Graph,
        )
    except (OSError, TypeError, IndexError) as exc:
        raise InstanceError(f"cannot read edge list {path}: {exc}") from exc
    for label in raw.nodes:
        _index(mapping, label)
    graph = nx.relabel_nodes(raw, mapping)
    graph.remove_edges_from(list(nx.selfloop_edges(graph)))
    _LOGGER.debug(
        "read %s: %d nodes, %d edges", path, graph.number_of_nodes(), graph.number_of_edges()
    )
    return graph, mapping


def align(graphs: List[nx.Graph], n: int) -> List[nx.Graph]:
    """Add isolated nodes so every graph spans ``0..n-1``."""
    for graph in graphs:
        graph.add_nodes_from(range(n))
    return graphs


def read_color_file(path, mapping: NodeMapping) -> Tuple[np.ndarray, Dict[str, int]]:
    """Color index per node; labels map to colors in order of first appearance."""
    colors: Dict[str, int] = {}
    assigned: Dict[int, int] = {}
    try:
        with open(path, encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                fields = line.split()
                if len(fields) != 2:
                    raise InstanceError(f"{path}:{lineno}: expected 'node color'")
                node, label = fields
                if node not in mapping:
                    raise InstanceError(f"{path}:{lineno}: unknown node {node!r}")
                assigned[mapping[node]] = _index(colors, label)
    except OSError as exc:
        raise InstanceError(f"cannot read color file {path}: {exc}") from exc
    missing = sorted(set(mapping.values()) - set(assigned))
    if missing:
        raise InstanceError(f"{path}: {len(missing)} nodes without a color, e.g. {missing[:5]}")
    color_map = np.array([assigned[v] for v in range(len(mapping))], dtype=np.intp)
    return color_map, colors


def read_probability_file(path, mapping: NodeMapping) -> Dict[Tuple[int, int], float]:
    """Propagation probability per directed edge ``(u, v)``."""
    try:
        raw = nx.read_edgelist(
            path, comments="#", nodetype=str, data=(("p", float),), create_using=nx.DiGraph
        )
    except (OSError, TypeError, IndexError, ValueError) as exc:
        raise InstanceError(f"cannot read probability file {path}: {exc}") from exc
    probs = {}
    for u, v, p in raw.edges(data="p"):
        if u not in mapping or v not in mapping:
            raise InstanceError(f"{path}: edge ({u}, {v}) not in the graph")
        if not 0 <= p <= 1:
            raise InstanceError(f"{path}: probability {p} of ({u}, {v}) outside [0, 1]")
        probs[(mapping[u], mapping[v])] = p
    return probs


def edge_array(graph: nx.Graph) -> np.ndarray:
    """Edges as a sorted ``(m, 2)`` index array; undirected edges as ``u < v``."""
    if graph.is_directed():
        edges = list(graph.edges())
    else:
        edges = [(min(u, v), max(u, v)) for u, v in graph.edges()]
    if not edges:
        return np.zeros((0, 2), dtype=np.intp)
    return np.array(sorted(edges), dtype=np.intp)


def write_edge_list(graph: nx.Graph, path) -> None:
    """Write sorted edges, one ``u v`` pair per line."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for u, v in edge_array(graph):
            handle.write(f"{u} {v}\n")


def node_labels(mapping: NodeMapping) -> List[str]:
    """Input label of every dense index."""
    labels = [""] * len(mapping)
    for label, index in mapping.items():
        labels[index] = label
    return labels


def write_node_mapping(mapping: NodeMapping, path) -> None:
    """Write one ``label index`` pair per line, by index."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for index, label in enumerate(node_labels(mapping)):
            handle.write(f"{label} {index}\n")
