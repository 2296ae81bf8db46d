"""Random graph families for coverage instances.

Every generator is a pure function of its parameters and a
``numpy.random.Generator``; nodes are ``0..n-1``, graphs are simple and
undirected.
"""
from dataclasses import dataclass, replace
import logging
import math
from typing import List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from ..const import (
    DEFAULT_BA_D,
    DEFAULT_ER_P,
    DEFAULT_KRONECKER_INITIATOR,
    DEFAULT_KRONECKER_POWER,
    FAMILIES,
    FAMILY_BA,
    FAMILY_ER,
    FAMILY_KRONECKER,
)
from ..exceptions import InputError
from ..objectives.coverage import CoverInstance

_LOGGER = logging.getLogger(__name__)

Initiator = Tuple[Tuple[float, ...], ...]


def _graph(n: int, rows: np.ndarray, cols: np.ndarray) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(range(n))
    graph.add_edges_from(zip(rows.tolist(), cols.tolist()))
    return graph


def gen_er(n: int, p: float, rng: np.random.Generator) -> nx.Graph:
    """Each unordered pair becomes an edge independently with probability ``p``."""
    if not 0 <= p <= 1:
        raise InputError(f"p must lie in [0, 1], got {p}")
    rows, cols = np.triu_indices(n, k=1)
    keep = rng.random(rows.size) < p
    return _graph(n, rows[keep], cols[keep])


def gen_ba(n: int, d: int, rng: np.random.Generator) -> nx.Graph:
    """Preferential attachment from a complete core on ``d + 1`` nodes.

    Each new node links to ``d`` distinct earlier nodes drawn with
    probability proportional to degree, rejecting repeats.
    """
    if not 1 <= d < n:
        raise InputError(f"need 1 <= d < n, got d={d}, n={n}")
    graph = nx.complete_graph(d + 1)
    degree = np.zeros(n)
    degree[: d + 1] = d
    for u in range(d + 1, n):
        weights = degree[:u] / degree[:u].sum()
        targets: List[int] = []
        while len(targets) < d:
            t = int(rng.choice(u, p=weights))
            if t not in targets:
                targets.append(t)
        graph.add_node(u)
        graph.add_edges_from((u, t) for t in targets)
        degree[targets] += 1
        degree[u] = d
    return graph


def kronecker_probabilities(initiator: Initiator, power: int) -> np.ndarray:
    """Edge probability matrix ``Π_t initiator[digit_t(i)][digit_t(j)]``."""
    base = np.asarray(initiator, dtype=float)
    if base.ndim != 2 or base.shape[0] != base.shape[1] or base.shape[0] < 1:
        raise InputError(f"initiator must be a square matrix, got shape {base.shape}")
    if ((base < 0) | (base > 1)).any():
        raise InputError("initiator entries must lie in [0, 1]")
    if power < 1:
        raise InputError(f"power must be at least 1, got {power}")
    b = base.shape[0]
    n = b ** power
    nodes = np.arange(n)
    probs = np.ones((n, n))
    for t in range(power):
        digits = (nodes // b ** t) % b
        probs *= base[digits[:, None], digits[None, :]]
    return probs


def gen_kronecker(initiator: Initiator, power: int, rng: np.random.Generator) -> nx.Graph:
    """Stochastic Kronecker graph; pair ``i < j`` uses entry ``(i, j)``."""
    probs = kronecker_probabilities(initiator, power)
    n = probs.shape[0]
    rows, cols = np.triu_indices(n, k=1)
    keep = rng.random(rows.size) < probs[rows, cols]
    return _graph(n, rows[keep], cols[keep])


@dataclass(frozen=True)
class GeneratorSpec:
    """Parameters of one random graph family."""

    family: str
    n: int = 64
    p: float = DEFAULT_ER_P
    d: int = DEFAULT_BA_D
    initiator: Initiator = DEFAULT_KRONECKER_INITIATOR
    power: int = DEFAULT_KRONECKER_POWER

    def __post_init__(self):
        """Validate."""
        if self.family not in FAMILIES:
            raise InputError(f"unknown family {self.family!r}; use one of {FAMILIES}")
        if self.family == FAMILY_KRONECKER:
            if self.power < 1:
                raise InputError(f"power must be at least 1, got {self.power}")
            expected = len(self.initiator) ** self.power
            if self.n != expected:
                raise InputError(f"kronecker graphs have n = {expected}, got {self.n}")
        elif self.family == FAMILY_ER and not 0 <= self.p <= 1:
            raise InputError(f"p must lie in [0, 1], got {self.p}")
        elif self.family == FAMILY_BA and not 1 <= self.d < self.n:
            raise InputError(f"need 1 <= d < n, got d={self.d}, n={self.n}")

    def generate(self, rng: np.random.Generator) -> nx.Graph:
        """Draw one graph."""
        if self.family == FAMILY_ER:
            return gen_er(self.n, self.p, rng)
        if self.family == FAMILY_BA:
            return gen_ba(self.n, self.d, rng)
        return gen_kronecker(self.initiator, self.power, rng)


def round_half_up(value: float) -> int:
    """Nearest integer, halves rounded up."""
    return int(math.floor(value + 0.5))


def gen_hard_schedule(family: str, k: int, base: GeneratorSpec) -> List[GeneratorSpec]:
    """Per-color specs for colors ``c = 1..k``.

    ER uses ``p_c = 0.1 + c/50``, BA uses ``d_c = round(5 + c/2)`` with
    halves rounded up.
    """
    if family == FAMILY_ER:
        return [replace(base, family=family, p=0.1 + c / 50) for c in range(1, k + 1)]
    if family == FAMILY_BA:
        return [
            replace(base, family=family, d=round_half_up(5 + c / 2)) for c in range(1, k + 1)
        ]
    raise InputError(f"no per-color schedule for family {family!r}")


def generate_cover_instance(
    spec: GeneratorSpec,
    k: int,
    seed: Optional[int],
    hard: bool = False,
    name: Optional[str] = None,
) -> CoverInstance:
    """``k`` graphs drawn from independent child seeds of ``seed``."""
    specs: Sequence[GeneratorSpec] = (
        gen_hard_schedule(spec.family, k, spec) if hard else [spec] * k
    )
    children = np.random.SeedSequence(seed).spawn(k)
    graphs = [s.generate(np.random.default_rng(child)) for s, child in zip(specs, children)]
    _LOGGER.debug(
        "generated %d %s graphs, edges %s",
        k,
        spec.family,
        [graph.number_of_edges() for graph in graphs],
    )
    label = name or f"{spec.family}{'-hard' if hard else ''}(n={spec.n},k={k},seed={seed})"
    return CoverInstance(graphs, label)
