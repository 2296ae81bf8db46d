"""Algorithms for multiobjective submodular maximization.

Shared run result, the lazy greedy selector every algorithm builds on, and
the registry of named algorithms. Algorithms register themselves from the
sibling modules, which are imported at the bottom of this module.
"""
from dataclasses import dataclass, field
import heapq
import importlib
import logging
import pkgutil
import time
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from .. import ElementSet, MultiObjectiveInstance, SubmodularOracle, marginal_gain
from ..exceptions import InputError

_LOGGER = logging.getLogger(__name__)

Runner = Callable[[MultiObjectiveInstance, int, int, Dict[str, Any]], "RunResult"]
ALGORITHMS: Dict[str, Runner] = {}


@dataclass
class RunResult:
    """Outcome of one algorithm run."""

    solution: ElementSet
    per_color_values: Dict[int, float]
    objective: float
    oracle_calls: int
    wall_time: float
    seed: Optional[int]
    algorithm_name: str
    instance_name: str
    extra: Dict[str, Any] = field(default_factory=dict)

    @property
    def argmin_color(self) -> int:
        """Lowest-index color attaining the objective."""
        return min(self.per_color_values, key=lambda c: (self.per_color_values[c], c))


def register(name: str) -> Callable[[Runner], Runner]:
    """Register a runner ``(instance, budget, seed, params) -> RunResult``."""

    def wrapper(runner: Runner) -> Runner:
        ALGORITHMS[name] = runner
        return runner

    return wrapper


def get_algorithm(name: str) -> Runner:
    """Look up a registered algorithm."""
    try:
        return ALGORITHMS[name]
    except KeyError:
        raise InputError(
            f"unknown algorithm {name!r}; known: {', '.join(sorted(ALGORITHMS))}"
        ) from None


def check_budget(instance: MultiObjectiveInstance, budget: int) -> None:
    """Reject budgets outside ``0..n``."""
    if not 0 <= budget <= instance.n:
        raise InputError(f"budget {budget} outside 0..{instance.n}")


def make_result(
    instance: MultiObjectiveInstance,
    solution: ElementSet,
    algorithm: str,
    seed: Optional[int],
    started: float,
    extra: Optional[Dict[str, Any]] = None,
) -> RunResult:
    """Evaluate ``solution`` on every color and package the run.

    The evaluation count is taken before the reporting evaluations.
    """
    calls = instance.total_calls()
    wall_time = time.perf_counter() - started
    instance.set_deadline(None)
    values = instance.current_values(solution)
    return RunResult(
        solution=solution,
        per_color_values={c: float(value) for c, value in enumerate(values)},
        objective=float(values.min()),
        oracle_calls=calls,
        wall_time=wall_time,
        seed=seed,
        algorithm_name=algorithm,
        instance_name=instance.name,
        extra=dict(extra or {}),
    )


class LazyGreedy:
    """Accelerated greedy selection for one oracle.

    Heap entries are ``(-bound, v, stamp)``; a bound is exact when its
    stamp equals the size of the partial solution it was computed for.
    The partial solution may also grow through other selectors.
    """

    def __init__(self, oracle: SubmodularOracle):
        """Init."""
        self.oracle = oracle
        self._heap: List[Tuple[float, int, int]] = [
            (-np.inf, v, -1) for v in range(oracle.n)
        ]

    def select(self, subset: ElementSet) -> Optional[Tuple[int, float]]:
        """Return the element of largest gain at ``subset`` and that gain."""
        stamp = len(subset)
        base = None
        while self._heap:
            neg_bound, v, seen = self._heap[0]
            if v in subset:
                heapq.heappop(self._heap)
                continue
            if seen == stamp:
                heapq.heappop(self._heap)
                return v, -neg_bound
            if base is None:
                base = self.oracle.current_value(subset)
            gain = marginal_gain(self.oracle, v, subset, base)
            heapq.heapreplace(self._heap, (-gain, v, stamp))
        return None

    def step(self, subset: ElementSet) -> Optional[ElementSet]:
        """Add the best element to ``subset`` and remember the new value."""
        picked = self.select(subset)
        if picked is None:
            return None
        v, gain = picked
        grown = subset.add(v)
        self.oracle.remember(grown, self.oracle.current_value(subset) + gain)
        return grown

    def run(
        self,
        budget: int,
        subset: Optional[ElementSet] = None,
        stop: Optional[Callable[[ElementSet], bool]] = None,
    ) -> ElementSet:
        """Grow ``subset`` to ``budget`` elements or until ``stop`` holds."""
        subset = subset if subset is not None else ElementSet()
        while len(subset) < budget and not (stop and stop(subset)):
            grown = self.step(subset)
            if grown is None:
                break
            subset = grown
        return subset


def lazy_greedy_single(oracle: SubmodularOracle, budget: int) -> ElementSet:
    """Greedy maximization of one oracle with lazy evaluations."""
    if not 0 <= budget <= oracle.n:
        raise InputError(f"budget {budget} outside 0..{oracle.n}")
    return LazyGreedy(oracle).run(budget)


def naive_greedy(oracle: SubmodularOracle, budget: int) -> ElementSet:
    """Greedy maximization evaluating every marginal in every step."""
    if not 0 <= budget <= oracle.n:
        raise InputError(f"budget {budget} outside 0..{oracle.n}")
    subset = ElementSet()
    for _ in range(budget):
        base = oracle.current_value(subset)
        best_v, best = -1, -np.inf
        for v in range(oracle.n):
            if v in subset:
                continue
            gain = marginal_gain(oracle, v, subset, base)
            if gain > best:
                best_v, best = v, gain
        subset = subset.add(best_v)
        oracle.remember(subset, base + best)
    return subset


NAME = __name__
PATH = __path__
for importer, modname, ispkg in pkgutil.walk_packages(path=PATH, prefix=NAME + "."):
    importlib.import_module(modname)
