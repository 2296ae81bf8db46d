"""Saturate: greedy on the sum of objectives truncated at a guessed optimum."""
import logging
import time
from typing import Dict, Tuple

import numpy as np

from . import LazyGreedy, RunResult, check_budget, make_result, register
from .search import binary_search_opt, guessing
from .. import ElementSet, MultiObjectiveInstance, SubmodularOracle
from ..const import (
    ALG_SATURATE,
    CONF_REL_TOL,
    DEFAULT_REL_TOL,
    SATURATE_ACCEPT_RATIO,
    TOLERANCE,
)
from ..exceptions import InputError

_LOGGER = logging.getLogger(__name__)


class TruncatedSumOracle(SubmodularOracle):
    """``Σ_c min(f_c(S), cap)``; each evaluation reads every color once."""

    def __init__(self, instance: MultiObjectiveInstance, cap: float):
        """Init."""
        self.instance = instance
        self.cap = cap
        super().__init__(instance.n, f"truncated-sum@{cap:g}")

    def _evaluate(self, members):
        if not members:
            values = np.array([oracle.empty_value for oracle in self.instance.oracles])
        else:
            values = self.instance.values(members)
        return float(np.minimum(values, self.cap).sum())


@guessing(ALG_SATURATE, SATURATE_ACCEPT_RATIO)
def _saturate(
    instance: MultiObjectiveInstance, budget: int, opt_guess: float
) -> Tuple[ElementSet, Dict[str, object]]:
    if opt_guess < 0:
        raise InputError(f"opt_guess must be nonnegative, got {opt_guess}")
    oracle = TruncatedSumOracle(instance, opt_guess)
    target = instance.k * opt_guess - TOLERANCE

    def saturated(subset):
        return oracle.current_value(subset) >= target

    subset = LazyGreedy(oracle).run(budget, stop=saturated)
    return subset, {"opt_guess": opt_guess, "saturated": saturated(subset)}


def saturate(instance: MultiObjectiveInstance, budget: int, opt_guess: float) -> RunResult:
    """Lazy greedy on the truncated sum until ``budget`` or saturation at ``k·opt_guess``."""
    started = time.perf_counter()
    check_budget(instance, budget)
    subset, extra = _saturate(instance, budget, opt_guess)
    return make_result(instance, subset, ALG_SATURATE, None, started, extra)


@register(ALG_SATURATE)
def run_saturate(instance, budget, seed=None, params=None):
    """Registered runner; searches the optimum guess by bisection."""
    params = params or {}
    return binary_search_opt(
        ALG_SATURATE,
        instance,
        budget,
        rel_tol=params.get(CONF_REL_TOL, DEFAULT_REL_TOL),
        seed=seed,
    )
