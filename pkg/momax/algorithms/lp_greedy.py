"""LP greedy with independent repetitions, pre-processing and the full pipeline."""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import logging
import math
import threading
import time
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import LazyGreedy, RunResult, check_budget, make_result, register
from .. import ElementSet, MultiObjectiveInstance
from ..const import (
    ALG_LP_GREEDY,
    ALG_LP_GREEDY_FULL,
    ALG_LP_GREEDY_MWU,
    BACKEND_EXACT,
    BACKEND_MWU,
    CONF_DELTA,
    CONF_EPSILON,
    CONF_MWU_ITERATIONS,
    CONF_PER_COLOR_BUDGET,
    CONF_PHI,
    CONF_REPETITIONS,
    DEFAULT_DELTA,
    DEFAULT_EPSILON,
    DEFAULT_PHI,
    DEFAULT_REPETITIONS,
    LP_BACKENDS,
)
from ..exceptions import BudgetTooSmallError, ConfigError, InputError
from ..lp import InstancePayoff, LazyBounds, solve_lazy_resolve
from ..lp.mwu import MWUConfig, solve_mwu

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class LPGreedyConfig:
    """Hyperparameters of LP greedy."""

    budget: int
    repetitions: int = DEFAULT_REPETITIONS
    phi: float = DEFAULT_PHI
    lp_backend: str = BACKEND_EXACT
    epsilon: float = DEFAULT_EPSILON
    seed: Optional[int] = None
    mwu_iterations: Optional[int] = None
    workers: int = 1

    def __post_init__(self):
        """Validate."""
        if self.budget < 1:
            raise InputError(f"budget must be at least 1, got {self.budget}")
        if self.repetitions < 1:
            raise InputError(f"repetitions must be at least 1, got {self.repetitions}")
        if self.phi < 1:
            raise InputError(f"phi must be at least 1, got {self.phi}")
        if self.lp_backend not in LP_BACKENDS:
            raise ConfigError(
                f"unknown LP backend {self.lp_backend!r}; use one of {LP_BACKENDS}"
            )
        if not 0 < self.epsilon < 1:
            raise ConfigError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.workers < 1:
            raise ConfigError(f"workers must be at least 1, got {self.workers}")

    @staticmethod
    def repetitions_for(delta: float) -> int:
        """Repetitions for failure probability ``delta``: ``max(⌈ln(2/δ)⌉, 1)``."""
        if not 0 < delta < 1:
            raise ConfigError(f"delta must lie in (0, 1), got {delta}")
        return max(math.ceil(math.log(2 / delta)), 1)


@dataclass
class PreprocessResult:
    """Partial solution built color by color before LP greedy."""

    T: ElementSet
    surviving_colors: List[int]
    per_color_added: Dict[int, Tuple[int, ...]] = field(default_factory=dict)


def _repetition(
    instance: MultiObjectiveInstance,
    cfg: LPGreedyConfig,
    initial: LazyBounds,
    max_gain: float,
    rng: np.random.Generator,
) -> Tuple[ElementSet, int]:
    subset = ElementSet()
    bounds = initial.copy()
    solves = 0
    for _ in range(cfg.budget):
        if cfg.lp_backend == BACKEND_MWU:
            payoff = InstancePayoff(instance, subset, cfg.budget, cfg.phi)
            mwu = MWUConfig.for_payoff(payoff, max_gain, cfg.epsilon, cfg.mwu_iterations)
            x, bounds = solve_mwu(payoff, bounds, mwu)
            solves += 1
        else:
            solution = solve_lazy_resolve(instance, subset, cfg.budget, cfg.phi, bounds)
            x = solution.x
            solves += solution.solves
        v = x.sample(rng)
        grown = subset.add(v)
        if bounds.column_fresh(v):
            for c, oracle in enumerate(instance.oracles):
                oracle.remember(grown, oracle.current_value(subset) + bounds.g[c, v])
        bounds.advance(v)
        subset = grown
    return subset, solves


def _lp_greedy(
    instance: MultiObjectiveInstance,
    cfg: LPGreedyConfig,
    seed_seq: np.random.SeedSequence,
    exclude: Sequence[int] = (),
) -> Tuple[ElementSet, Dict[str, object]]:
    exclude = tuple(exclude)
    if cfg.budget > instance.n - len(exclude):
        raise InputError(
            f"budget {cfg.budget} exceeds the {instance.n - len(exclude)} available elements"
        )
    initial = LazyBounds.from_instance(instance)
    for v in exclude:
        initial.advance(v)
    initial.fresh[:] = True
    max_gain = initial.max_gain

    counted = threading.Lock()

    def run(child):
        clone = instance.clone()
        try:
            subset, solves = _repetition(
                clone, cfg, initial, max_gain, np.random.default_rng(child)
            )
            return subset, float(clone.current_values(subset).min()), solves
        finally:
            with counted:
                instance.absorb(clone)

    children = seed_seq.spawn(cfg.repetitions)
    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            outcomes = list(pool.map(run, children))
    else:
        outcomes = [run(child) for child in children]

    best, best_value, total_solves = ElementSet(), -math.inf, 0
    for index, (subset, value, solves) in enumerate(outcomes):
        total_solves += solves
        _LOGGER.debug("repetition %d: min value %s", index, value)
        if value >= best_value:
            best, best_value = subset, value
    extra = {
        "phi": cfg.phi,
        "repetitions": cfg.repetitions,
        "backend": cfg.lp_backend,
        "lp_solves": total_solves,
    }
    return best, extra


def _seed_sequence(cfg: LPGreedyConfig, rng: Optional[np.random.Generator]):
    if rng is not None:
        return np.random.SeedSequence(int(rng.integers(2 ** 63)))
    return np.random.SeedSequence(cfg.seed)


def lp_greedy(
    instance: MultiObjectiveInstance,
    cfg: LPGreedyConfig,
    rng: Optional[np.random.Generator] = None,
    exclude: Sequence[int] = (),
) -> RunResult:
    """Best of ``cfg.repetitions`` randomized LP greedy runs.

    Each repetition solves the iteration LP at its partial solution and
    samples the next element from the LP's distribution. Elements already
    chosen, or listed in ``exclude``, get no mass. Repetition ``i`` draws
    from the ``i``-th child of the seed, so results do not depend on
    ``cfg.workers``.
    """
    started = time.perf_counter()
    best, extra = _lp_greedy(instance, cfg, _seed_sequence(cfg, rng), exclude)
    name = ALG_LP_GREEDY_MWU if cfg.lp_backend == BACKEND_MWU else ALG_LP_GREEDY
    return make_result(instance, best, name, cfg.seed, started, extra)


def preprocess(instance: MultiObjectiveInstance, per_color_budget: int) -> PreprocessResult:
    """Greedily add ``per_color_budget`` elements per color to a shared set.

    Colors are served in index order. Every color is kept as surviving;
    colors already satisfied by ``T`` never bind the minimum afterwards.
    """
    if per_color_budget < 0:
        raise InputError(f"negative per-color budget {per_color_budget}")
    if instance.k * per_color_budget > instance.n:
        raise InputError(
            f"k·B' = {instance.k * per_color_budget} exceeds n = {instance.n}"
        )
    subset = ElementSet()
    added = {}
    for c, oracle in enumerate(instance.oracles):
        before = len(subset)
        subset = LazyGreedy(oracle).run(before + per_color_budget, subset)
        added[c] = subset.members[before:]
    return PreprocessResult(subset, list(range(instance.k)), added)


def full_pipeline_budget(k: int, epsilon: float) -> int:
    """Per-color pre-processing budget ``⌈36·ln k / ε²⌉``; zero for one color."""
    if k <= 1:
        return 0
    return math.ceil(36 * math.log(k) / epsilon ** 2)


def lp_greedy_full_pipeline(
    instance: MultiObjectiveInstance,
    budget: int,
    epsilon: float = DEFAULT_EPSILON,
    delta: float = DEFAULT_DELTA,
    rng: Optional[np.random.Generator] = None,
    seed: Optional[int] = None,
    per_color_budget: Optional[int] = None,
    phi: float = 1.0,
    lp_backend: str = BACKEND_MWU,
    mwu_iterations: Optional[int] = None,
) -> RunResult:
    """Pre-process, then run LP greedy on ``A -> f_c(A ∪ T)`` with the rest.

    Returns ``T ∪ S`` valued under the original objectives.
    """
    started = time.perf_counter()
    check_budget(instance, budget)
    if per_color_budget is None:
        per_color_budget = full_pipeline_budget(instance.k, epsilon)
    if budget <= instance.k * per_color_budget:
        raise BudgetTooSmallError(
            f"B = {budget} leaves no room after pre-processing; the pipeline "
            f"needs B > k·B' = {instance.k}·{per_color_budget}"
        )
    pre = preprocess(instance, per_color_budget)
    remaining = budget - len(pre.T)
    if remaining < 1:
        raise BudgetTooSmallError(
            f"B = {budget} leaves {remaining} elements after pre-processing "
            f"|T| = {len(pre.T)}; the pipeline needs B > k·B' = "
            f"{instance.k}·{per_color_budget}"
        )
    cfg = LPGreedyConfig(
        budget=remaining,
        repetitions=LPGreedyConfig.repetitions_for(delta),
        phi=phi,
        lp_backend=lp_backend,
        epsilon=epsilon,
        seed=seed,
        mwu_iterations=mwu_iterations,
    )
    shifted = instance.shifted(pre.T)
    try:
        rest, extra = _lp_greedy(shifted, cfg, _seed_sequence(cfg, rng), exclude=pre.T)
    finally:
        instance.absorb(shifted)
    extra.update(per_color_budget=per_color_budget, preprocessed=len(pre.T))
    return make_result(
        instance, pre.T.union(rest), ALG_LP_GREEDY_FULL, seed, started, extra
    )


def _config(budget, seed, params, backend):
    params = params or {}
    return LPGreedyConfig(
        budget=budget,
        repetitions=params.get(CONF_REPETITIONS, DEFAULT_REPETITIONS),
        phi=params.get(CONF_PHI, DEFAULT_PHI),
        lp_backend=backend,
        epsilon=params.get(CONF_EPSILON, DEFAULT_EPSILON),
        seed=seed,
        mwu_iterations=params.get(CONF_MWU_ITERATIONS),
    )


@register(ALG_LP_GREEDY)
def run_lp_greedy(instance, budget, seed=None, params=None):
    """Registered runner, exact LP with lazy re-solves."""
    return lp_greedy(instance, _config(budget, seed, params, BACKEND_EXACT))


@register(ALG_LP_GREEDY_MWU)
def run_lp_greedy_mwu(instance, budget, seed=None, params=None):
    """Registered runner, MWU LP backend."""
    return lp_greedy(instance, _config(budget, seed, params, BACKEND_MWU))


@register(ALG_LP_GREEDY_FULL)
def run_lp_greedy_full(instance, budget, seed=None, params=None):
    """Registered runner for the full pipeline."""
    params = params or {}
    return lp_greedy_full_pipeline(
        instance,
        budget,
        epsilon=params.get(CONF_EPSILON, DEFAULT_EPSILON),
        delta=params.get(CONF_DELTA, DEFAULT_DELTA),
        seed=seed,
        per_color_budget=params.get(CONF_PER_COLOR_BUDGET),
        mwu_iterations=params.get(CONF_MWU_ITERATIONS),
    )
