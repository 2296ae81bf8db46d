"""Multiplicative weights solver for the iteration LP with lazy evaluations.

The LP is read as a zero-sum game: colors play weights ``y`` and elements
best-respond. Colors with a high payoff lose weight. The element side
averages its best responses.
"""
from dataclasses import dataclass
import logging
import math
from typing import Callable, Optional, Tuple

import numpy as np

from . import LazyBounds, PayoffOracle
from .. import ColorWeights, ElementDistribution
from ..exceptions import ConfigError

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class MWUConfig:
    """Rounds, step size and loss scale of the MWU solver."""

    iterations: int
    eta: float
    loss_scale: float

    def __post_init__(self):
        """Validate."""
        if int(self.iterations) != self.iterations or self.iterations < 1:
            raise ConfigError(f"iterations must be a positive integer: {self.iterations}")
        if not 0 < self.eta < 1:
            raise ConfigError(f"eta must lie in (0, 1): {self.eta}")
        if not self.loss_scale > 0:
            raise ConfigError(f"loss_scale must be positive: {self.loss_scale}")

    @staticmethod
    def default_iterations(k: int, budget: int, epsilon: float) -> int:
        """``⌈16·B²·ln k / ε²⌉``, at least one round."""
        return max(1, math.ceil(16 * budget ** 2 * math.log(k) / epsilon ** 2))

    @classmethod
    def for_payoff(
        cls,
        payoff: PayoffOracle,
        max_gain: float,
        epsilon: float,
        iterations: Optional[int] = None,
    ) -> "MWUConfig":
        """Parameters for one greedy iteration.

        Losses are scaled by ``B·M + φ·max_c f_c(S)``, which bounds every
        payoff since no marginal exceeds ``M``.
        """
        if not 0 < epsilon < 1:
            raise ConfigError(f"epsilon must lie in (0, 1): {epsilon}")
        scale = payoff.budget * max_gain + payoff.phi * float(payoff.bases.max())
        return cls(
            iterations=iterations or cls.default_iterations(payoff.k, payoff.budget, epsilon),
            eta=min(epsilon / (4 * payoff.budget), 0.5),
            loss_scale=scale if scale > 0 else 1.0,
        )


def lazy_best_response(
    y: ColorWeights, bounds: LazyBounds, refresh: Callable[[int], object]
) -> int:
    """Element maximizing ``Σ_c y_c·f_c(v|S)``, lowest index on ties.

    Candidates are visited in decreasing bound-score order; a stale
    candidate is refreshed only while its bound can still beat the best
    true score seen.
    """
    scores = y.weight @ bounds.g
    scores[~bounds.active] = -np.inf
    if bounds.fresh[:, bounds.active].all():
        return int(np.argmax(scores))

    best_v, best = -1, -np.inf
    for v in np.argsort(-scores, kind="stable"):
        v = int(v)
        bound = scores[v]
        if bound == -np.inf or bound < best or (bound == best and v > best_v):
            break
        if not bounds.column_fresh(v):
            refresh(v)
            score = float(y.weight @ bounds.g[:, v])
        else:
            score = float(bound)
        if score > best or (score == best and v < best_v):
            best_v, best = v, score
    return best_v


def solve_mwu(
    payoff: PayoffOracle, bounds: LazyBounds, cfg: MWUConfig
) -> Tuple[ElementDistribution, LazyBounds]:
    """Average of ``cfg.iterations`` best responses against MWU color weights."""
    k, n = bounds.g.shape
    weights = np.full(k, 1.0 / k)
    counts = np.zeros(n)
    refreshed = 0

    def refresh(v):
        nonlocal refreshed
        refreshed += payoff.refresh(bounds, v)

    for _ in range(cfg.iterations):
        v = lazy_best_response(ColorWeights(weights), bounds, refresh)
        counts[v] += 1
        losses = payoff.column(bounds, v) / cfg.loss_scale
        weights = weights * (1.0 - cfg.eta * losses)
        if (weights < 0).any() or weights.sum() <= 0:
            raise ConfigError(
                f"weights left the simplex: eta={cfg.eta} too large for "
                f"loss_scale={cfg.loss_scale} (max scaled loss {losses.max():.3g})"
            )
        weights = weights / weights.sum()

    _LOGGER.debug(
        "MWU: %d rounds, %d refreshed bounds, support %d",
        cfg.iterations,
        refreshed,
        int((counts > 0).sum()),
    )
    return ElementDistribution(counts / cfg.iterations), bounds
