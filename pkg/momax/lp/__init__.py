"""Per-iteration LP of LP greedy and its exact solution."""
from dataclasses import dataclass, replace
import logging
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import linprog

from .. import ColorWeights, ElementDistribution, ElementSet, MultiObjectiveInstance
from .. import marginal_gain
from ..const import SUPPORT_TOLERANCE, TOLERANCE
from ..exceptions import InputError, SolverError

_LOGGER = logging.getLogger(__name__)


class IterationLP:
    """Payoff matrix ``B·f_c(v|S) + φ·f_c(S)`` for a fixed partial solution.

    Columns listed in ``excluded`` (elements already in ``S``) receive no
    mass when the LP is solved.
    """

    def __init__(self, payoff, budget: int, phi: float, excluded: Sequence[int] = ()):
        """Init."""
        payoff = np.asarray(payoff, dtype=float)
        if payoff.ndim != 2 or 0 in payoff.shape:
            raise InputError(f"payoff must be a non-empty k×n matrix, got {payoff.shape}")
        if (payoff < -TOLERANCE).any():
            raise InputError(f"negative payoff {payoff.min()}")
        if phi < 1:
            raise InputError(f"phi must be at least 1, got {phi}")
        self.payoff = np.clip(payoff, 0.0, None)
        self.budget = budget
        self.phi = phi
        self.allowed = np.ones(payoff.shape[1], dtype=bool)
        self.allowed[list(excluded)] = False
        if not self.allowed.any():
            raise InputError("every element is excluded from the LP")

    @property
    def k(self) -> int:
        """Number of colors."""
        return self.payoff.shape[0]

    @property
    def n(self) -> int:
        """Number of elements."""
        return self.payoff.shape[1]

    def game_value(self, x) -> float:
        """``min_c Σ_v x_v·payoff[c][v]``."""
        mass = x.mass if isinstance(x, ElementDistribution) else np.asarray(x)
        return float((self.payoff @ mass).min())


@dataclass(frozen=True)
class LPSolution:
    """Optimal element distribution of an iteration LP."""

    x: ElementDistribution
    xi: float
    duals: Optional[ColorWeights] = None
    solves: int = 1


class PayoffOracle:
    """Lazy column access to the payoffs of one greedy iteration."""

    budget: int
    phi: float
    bases: np.ndarray

    @property
    def k(self) -> int:
        """Number of colors."""
        return self.bases.size

    def gain(self, c: int, v: int) -> float:
        """True marginal gain of ``v`` for color ``c``."""
        raise NotImplementedError

    def column(self, bounds: "LazyBounds", v: int) -> np.ndarray:
        """Payoffs of ``v`` for all colors from the current bounds."""
        return self.budget * bounds.g[:, v] + self.phi * self.bases

    def refresh(self, bounds: "LazyBounds", v: int) -> int:
        """Replace stale bounds of ``v`` by true gains; return how many."""
        stale = np.flatnonzero(~bounds.fresh[:, v])
        for c in stale:
            bounds.set(int(c), v, self.gain(int(c), v))
        return stale.size


class InstancePayoff(PayoffOracle):
    """Payoffs read from the oracles of an instance at partial solution ``S``."""

    def __init__(
        self,
        instance: MultiObjectiveInstance,
        subset: ElementSet,
        budget: int = 1,
        phi: float = 1.0,
    ):
        """Init; costs ``k`` evaluations unless ``f_c(S)`` is cached."""
        self.instance = instance
        self.subset = subset
        self.budget = budget
        self.phi = phi
        self.bases = instance.current_values(subset)

    def gain(self, c, v):
        """Marginal gain through the color's oracle."""
        return marginal_gain(self.instance.oracles[c], v, self.subset, self.bases[c])


class MatrixPayoff(PayoffOracle):
    """Payoffs of a fixed matrix; counts column reads as evaluations."""

    def __init__(self, gains, budget: int = 1, phi: float = 1.0, bases=None):
        """Init."""
        self.gains = np.asarray(gains, dtype=float)
        self.budget = budget
        self.phi = phi
        self.bases = (
            np.zeros(self.gains.shape[0]) if bases is None else np.asarray(bases, float)
        )
        self.evaluations = 0

    @classmethod
    def from_payoff(cls, payoff) -> "MatrixPayoff":
        """Oracle whose payoffs are exactly ``payoff``."""
        return cls(payoff, budget=1, phi=1.0)

    def gain(self, c, v):
        """Matrix entry."""
        self.evaluations += 1
        return float(self.gains[c, v])


class LazyBounds:
    """Upper bounds on the current marginal gains of every (color, element).

    ``fresh[c, v]`` marks bounds equal to the true marginal with respect to
    the current partial solution. Elements already selected are inactive.
    """

    def __init__(self, g, fresh=None, active=None):
        """Init."""
        self.g = np.array(g, dtype=float)
        k, n = self.g.shape
        self.fresh = (
            np.zeros((k, n), dtype=bool) if fresh is None else np.array(fresh, bool)
        )
        self.active = np.ones(n, dtype=bool) if active is None else np.array(active, bool)

    @classmethod
    def evaluate(cls, payoff: PayoffOracle, n: int, subset: Sequence[int] = ()):
        """Fresh bounds from true gains of every element outside ``subset``."""
        bounds = cls(np.zeros((payoff.k, n)), np.ones((payoff.k, n), dtype=bool))
        for v in subset:
            bounds.active[v] = False
        for v in np.flatnonzero(bounds.active):
            for c in range(payoff.k):
                bounds.g[c, v] = payoff.gain(c, int(v))
        return bounds

    @classmethod
    def from_instance(
        cls, instance: MultiObjectiveInstance, subset: Optional[ElementSet] = None
    ) -> "LazyBounds":
        """Evaluate every marginal at ``subset``; ``k·n`` evaluations at ``∅``."""
        subset = subset if subset is not None else ElementSet()
        return cls.evaluate(InstancePayoff(instance, subset), instance.n, subset)

    @property
    def max_gain(self) -> float:
        """Largest bound over active elements."""
        if not self.active.any():
            return 0.0
        return float(self.g[:, self.active].max())

    def set(self, c: int, v: int, gain: float) -> None:
        """Record the true gain of ``v`` for color ``c``."""
        self.g[c, v] = gain
        self.fresh[c, v] = True

    def column_fresh(self, v: int) -> bool:
        """Whether all colors of ``v`` hold true gains."""
        return bool(self.fresh[:, v].all())

    def advance(self, added: int) -> None:
        """Mark ``added`` selected; the remaining bounds go stale."""
        self.active[added] = False
        self.g[:, added] = 0.0
        self.fresh[:] = False
        self.fresh[:, added] = True

    def copy(self) -> "LazyBounds":
        """Independent copy."""
        return LazyBounds(self.g, self.fresh, self.active)


def build_iteration_lp(
    instance: MultiObjectiveInstance,
    subset: ElementSet,
    budget: int,
    phi: float,
    bounds: Optional[LazyBounds] = None,
) -> IterationLP:
    """Assemble the iteration LP at ``subset``.

    Without ``bounds`` every marginal is evaluated (``k·n`` marginals plus
    ``k`` base values); with ``bounds`` their upper bounds are used as is.
    Inactive elements of the bounds, which include ``subset``, get no mass.
    """
    if len(subset) >= budget:
        raise InputError(f"partial solution of size {len(subset)} fills budget {budget}")
    if phi < 1:
        raise InputError(f"phi must be at least 1, got {phi}")
    payoff = InstancePayoff(instance, subset, budget, phi)
    if bounds is None:
        bounds = LazyBounds.evaluate(payoff, instance.n, subset)
    matrix = budget * bounds.g + phi * payoff.bases[:, None]
    excluded = set(np.flatnonzero(~bounds.active).tolist()) | set(subset.members)
    return IterationLP(matrix, budget, phi, excluded=sorted(excluded))


def solve_exact(lp: IterationLP) -> LPSolution:
    """Solve ``max_{x∈Δ_V} min_c Σ_v x_v·payoff[c][v]`` with HiGHS.

    When a single element attains the optimum the point mass on the
    lowest such index is returned. With one color that is the lowest index
    of the exact row maximum; with several, pure strategies within a
    relative ``TOLERANCE`` of the LP value count as attaining it.
    """
    k, n = lp.payoff.shape
    scale = lp.payoff.max()
    if scale <= 0:
        return LPSolution(
            ElementDistribution.point_mass(n, int(np.flatnonzero(lp.allowed)[0])),
            0.0,
            ColorWeights.uniform(k),
        )
    payoff = lp.payoff / scale

    cost = np.zeros(n + 1)
    cost[n] = -1.0
    a_ub = np.hstack([-payoff, np.ones((k, 1))])
    a_eq = np.append(np.ones(n), 0.0)[None, :]
    bounds = [(0.0, None) if allowed else (0.0, 0.0) for allowed in lp.allowed]
    bounds.append((None, None))
    res = linprog(
        cost,
        A_ub=a_ub,
        b_ub=np.zeros(k),
        A_eq=a_eq,
        b_eq=[1.0],
        bounds=bounds,
        method="highs",
    )
    if res.status != 0:
        raise SolverError(
            f"LP status {res.status} ({res.message}); payoffs in "
            f"[{lp.payoff.min()}, {lp.payoff.max()}], "
            f"condition number {np.linalg.cond(lp.payoff):.3g}"
        )

    xi = -res.fun * scale
    duals = np.clip(-np.asarray(res.ineqlin.marginals), 0.0, None)
    duals = ColorWeights.normalized(duals) if duals.sum() > 0 else ColorWeights.uniform(k)

    pure = np.where(lp.allowed, lp.payoff.min(axis=0), -np.inf)
    if k == 1:
        attaining = np.flatnonzero(pure == pure.max())
    else:
        attaining = np.flatnonzero(pure >= xi - TOLERANCE * max(1.0, abs(xi)))
    if attaining.size:
        x = ElementDistribution.point_mass(n, int(attaining[0]))
    else:
        mass = np.clip(res.x[:n], 0.0, None)
        mass[mass < SUPPORT_TOLERANCE] = 0.0
        x = ElementDistribution.normalized(mass)
    return LPSolution(x, lp.game_value(x), duals)


def solve_lazy_resolve(
    instance: MultiObjectiveInstance,
    subset: ElementSet,
    budget: int,
    phi: float,
    bounds: LazyBounds,
    exact_backend: Callable[[IterationLP], LPSolution] = solve_exact,
) -> LPSolution:
    """Solve the iteration LP on upper bounds, refreshing the support.

    Re-solves until every element carrying mass has true marginals, so the
    result is optimal for the true payoffs. ``bounds`` is updated in place.
    """
    payoff = InstancePayoff(instance, subset, budget, phi)
    solves = 0
    while True:
        lp = build_iteration_lp(instance, subset, budget, phi, bounds)
        solution = exact_backend(lp)
        solves += 1
        stale = [v for v in solution.x.support() if not bounds.column_fresh(v)]
        if not stale:
            _LOGGER.debug(
                "LP at |S|=%d settled after %d solves, xi=%s", len(subset), solves, solution.xi
            )
            return replace(solution, solves=solves)
        for v in stale:
            payoff.refresh(bounds, v)
