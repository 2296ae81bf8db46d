"""Greedy heuristics that serve one color per step."""
import logging
import time

import numpy as np

from . import LazyGreedy, check_budget, make_result, register
from .. import ElementSet, MultiObjectiveInstance
from ..const import ALG_MINIMUM, ALG_ROUND_ROBIN

_LOGGER = logging.getLogger(__name__)


def _serve(selectors, instance, subset, color):
    picked = selectors[color].select(subset)
    if picked is None:
        return None
    v, gain = picked
    oracle = instance.oracles[color]
    grown = subset.add(v)
    oracle.remember(grown, oracle.current_value(subset) + gain)
    return grown


def greedy_round_robin(instance: MultiObjectiveInstance, budget: int) -> ElementSet:
    """Step ``i`` (counting from 1) adds the best element for color ``i mod k``."""
    check_budget(instance, budget)
    selectors = [LazyGreedy(oracle) for oracle in instance.oracles]
    subset = ElementSet()
    for step in range(1, budget + 1):
        grown = _serve(selectors, instance, subset, step % instance.k)
        if grown is None:
            break
        subset = grown
    return subset


def greedy_minimum(instance: MultiObjectiveInstance, budget: int) -> ElementSet:
    """Each step adds the best element for the currently worst color."""
    check_budget(instance, budget)
    selectors = [LazyGreedy(oracle) for oracle in instance.oracles]
    subset = ElementSet()
    for _ in range(budget):
        color = int(np.argmin(instance.current_values(subset)))
        grown = _serve(selectors, instance, subset, color)
        if grown is None:
            break
        _LOGGER.debug("|S|=%d served color %d", len(grown), color)
        subset = grown
    return subset


@register(ALG_ROUND_ROBIN)
def run_round_robin(instance, budget, seed=None, params=None):
    """Registered runner."""
    started = time.perf_counter()
    return make_result(
        instance, greedy_round_robin(instance, budget), ALG_ROUND_ROBIN, seed, started
    )


@register(ALG_MINIMUM)
def run_minimum(instance, budget, seed=None, params=None):
    """Registered runner."""
    started = time.perf_counter()
    return make_result(
        instance, greedy_minimum(instance, budget), ALG_MINIMUM, seed, started
    )
