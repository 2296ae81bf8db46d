"""Bisection over the optimum guess for algorithms that need one."""
import logging
import time
from typing import Callable, Dict, Optional, Tuple, Union

from . import RunResult, check_budget, lazy_greedy_single, make_result
from .. import ElementSet, MultiObjectiveInstance
from ..const import DEFAULT_REL_TOL
from ..exceptions import InputError

_LOGGER = logging.getLogger(__name__)

Guessing = Callable[[MultiObjectiveInstance, int, float], Tuple[ElementSet, Dict]]
GUESSING: Dict[str, Tuple[Guessing, float]] = {}


def guessing(name: str, accept_ratio: float) -> Callable[[Guessing], Guessing]:
    """Register an algorithm parameterized by a guess of the optimum.

    A probe counts as feasible when the algorithm reaches
    ``accept_ratio`` times the guess.
    """

    def wrapper(func: Guessing) -> Guessing:
        GUESSING[name] = (func, accept_ratio)
        return func

    return wrapper


def single_color_bound(instance: MultiObjectiveInstance, budget: int) -> float:
    """``min_c f_c(G_c)`` where ``G_c`` is the greedy top-``budget`` set of color ``c``."""
    bound = float("inf")
    for oracle in instance.oracles:
        chosen = lazy_greedy_single(oracle, budget)
        bound = min(bound, oracle.current_value(chosen))
    return bound


def binary_search_opt(
    algorithm: Union[str, Guessing],
    instance: MultiObjectiveInstance,
    budget: int,
    rel_tol: float = DEFAULT_REL_TOL,
    accept_ratio: Optional[float] = None,
    seed: Optional[int] = None,
    name: Optional[str] = None,
) -> RunResult:
    """Bisect the optimum guess over ``[0, hi]`` and keep the best probe.

    The bracket shrinks until its width is at most ``rel_tol·hi``.
    """
    started = time.perf_counter()
    if not 0 < rel_tol < 1:
        raise InputError(f"rel_tol must lie in (0, 1), got {rel_tol}")
    check_budget(instance, budget)
    if isinstance(algorithm, str):
        if algorithm not in GUESSING:
            raise InputError(f"{algorithm!r} does not take an optimum guess")
        func, ratio = GUESSING[algorithm]
        name = name or algorithm
    else:
        func, ratio = algorithm, 1.0
        name = name or getattr(algorithm, "__name__", "custom")
    if accept_ratio is not None:
        ratio = accept_ratio

    hi = single_color_bound(instance, budget)
    lo, width = 0.0, rel_tol * hi
    best, best_value, best_guess, probes = ElementSet(), -float("inf"), 0.0, 0
    while hi > 0 and hi - lo > width:
        mid = (lo + hi) / 2
        subset, _ = func(instance, budget, mid)
        value = float(instance.values(subset).min())
        probes += 1
        feasible = value >= ratio * mid
        _LOGGER.debug(
            "%s probe %d: guess %s -> %s (%s)",
            name,
            probes,
            mid,
            value,
            "feasible" if feasible else "infeasible",
        )
        if value > best_value:
            best, best_value, best_guess = subset, value, mid
        if feasible:
            lo = mid
        else:
            hi = mid
    return make_result(
        instance,
        best,
        name,
        seed,
        started,
        {"opt_probes": probes, "opt_guess": best_guess},
    )
