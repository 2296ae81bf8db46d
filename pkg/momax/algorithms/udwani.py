"""Multiplicative weights over colors with greedy on the weighted sum."""
import logging
import math
import time
from typing import Dict, Tuple

import numpy as np

from . import LazyGreedy, RunResult, check_budget, make_result, register
from .search import binary_search_opt, guessing
from .. import ColorWeights, ElementSet, MultiObjectiveInstance, SubmodularOracle
from ..const import (
    ALG_UDWANI,
    CONF_REL_TOL,
    CONF_UDWANI_ITERATIONS,
    DEFAULT_REL_TOL,
    UDWANI_ACCEPT_RATIO,
    UDWANI_ITERATIONS,
    UDWANI_STEP,
)
from ..exceptions import InputError

_LOGGER = logging.getLogger(__name__)


class WeightedSumOracle(SubmodularOracle):
    """``Σ_c y_c·f_c(S)`` for fixed color weights."""

    def __init__(self, instance: MultiObjectiveInstance, weights: ColorWeights):
        """Init."""
        self.instance = instance
        self.weights = weights
        super().__init__(instance.n, "weighted-sum")

    def _evaluate(self, members):
        if not members:
            values = np.array([oracle.empty_value for oracle in self.instance.oracles])
        else:
            values = self.instance.values(members)
        return float(self.weights.weight @ values)


@guessing(ALG_UDWANI, UDWANI_ACCEPT_RATIO)
def _udwani(
    instance: MultiObjectiveInstance,
    budget: int,
    opt_guess: float,
    iterations: int = UDWANI_ITERATIONS,
) -> Tuple[ElementSet, Dict[str, object]]:
    if opt_guess <= 0:
        raise InputError(f"opt_guess must be positive, got {opt_guess}")
    weights = ColorWeights.uniform(instance.k)
    best, best_value = ElementSet(), -math.inf
    for t in range(iterations):
        subset = LazyGreedy(WeightedSumOracle(instance, weights)).run(budget)
        values = instance.values(subset)
        if values.min() > best_value:
            best, best_value = subset, float(values.min())
        achieved = np.minimum(values, opt_guess) / opt_guess
        weights = ColorWeights.normalized(weights.weight * np.exp(-UDWANI_STEP * achieved))
        _LOGGER.debug("iteration %d: min value %s, weights %s", t, values.min(), weights)
    return best, {"opt_guess": opt_guess, "iterations": iterations}


def udwani_mwu(
    instance: MultiObjectiveInstance,
    budget: int,
    opt_guess: float,
    iterations: int = UDWANI_ITERATIONS,
) -> RunResult:
    """Best of ``iterations`` greedy runs on MWU-weighted sums of the objectives.

    Colors that already reach ``opt_guess`` lose weight.
    """
    started = time.perf_counter()
    check_budget(instance, budget)
    subset, extra = _udwani(instance, budget, opt_guess, iterations)
    return make_result(instance, subset, ALG_UDWANI, None, started, extra)


@register(ALG_UDWANI)
def run_udwani(instance, budget, seed=None, params=None):
    """Registered runner; searches the optimum guess by bisection."""
    params = params or {}
    iterations = params.get(CONF_UDWANI_ITERATIONS, UDWANI_ITERATIONS)

    def probe(inst, b, guess):
        return _udwani(inst, b, guess, iterations)

    return binary_search_opt(
        probe,
        instance,
        budget,
        rel_tol=params.get(CONF_REL_TOL, DEFAULT_REL_TOL),
        accept_ratio=UDWANI_ACCEPT_RATIO,
        seed=seed,
        name=ALG_UDWANI,
    )
