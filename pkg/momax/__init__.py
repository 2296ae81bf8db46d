"""Multiobjective monotone submodular maximization.

Shared abstractions: the universe and color set of an instance, element sets
and distributions over them, the oracle contract with evaluation accounting,
and the multiobjective instance tying one oracle per color together.
"""
import copy
from dataclasses import dataclass
import itertools
import logging
import math
import time
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from .const import BRUTE_FORCE_LIMIT, TOLERANCE
from .exceptions import InputError, InstanceError, SizeError, TimeLimitExceeded

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class Universe:
    """Elements ``0..n-1``."""

    n: int

    def __post_init__(self):
        """Validate the element count."""
        if self.n < 1:
            raise InputError(f"universe needs at least one element, got {self.n}")

    def check(self, v: int) -> int:
        """Return ``v`` if it indexes an element of the universe."""
        if not 0 <= v < self.n:
            raise InputError(f"element {v} outside universe of size {self.n}")
        return int(v)


@dataclass(frozen=True)
class ColorSet:
    """Colors ``0..k-1``."""

    k: int

    def __post_init__(self):
        """Validate the color count."""
        if self.k < 1:
            raise InputError(f"need at least one color, got {self.k}")


class ElementSet:
    """Duplicate-free set of elements that remembers insertion order."""

    __slots__ = ("_members", "_index")

    def __init__(self, members: Iterable[int] = ()):
        """Init."""
        ordered = tuple(int(v) for v in members)
        index = frozenset(ordered)
        if len(index) != len(ordered):
            raise InputError(f"duplicate elements in {ordered}")
        self._members = ordered
        self._index = index

    @property
    def members(self) -> Tuple[int, ...]:
        """Members in insertion order."""
        return self._members

    @property
    def key(self) -> frozenset:
        """Order-free identity of the set."""
        return self._index

    def add(self, v: int) -> "ElementSet":
        """Return a new set with ``v`` appended."""
        if v in self._index:
            raise InputError(f"element {v} already in set")
        return ElementSet(self._members + (int(v),))

    def union(self, other: Iterable[int]) -> "ElementSet":
        """Return self followed by the members of ``other`` not yet present."""
        extra = [v for v in dict.fromkeys(int(v) for v in other) if v not in self._index]
        return ElementSet(self._members + tuple(extra))

    def __contains__(self, v) -> bool:
        return v in self._index

    def __iter__(self) -> Iterator[int]:
        return iter(self._members)

    def __len__(self) -> int:
        return len(self._members)

    def __eq__(self, other) -> bool:
        if isinstance(other, ElementSet):
            return self._index == other._index
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._index)

    def __repr__(self) -> str:
        return f"ElementSet({list(self._members)})"


class _Simplex:
    """Probability vector validated on construction."""

    def __init__(self, values):
        """Init."""
        values = np.asarray(values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise InputError("probability vector must be one-dimensional and non-empty")
        if (values < -TOLERANCE).any():
            raise InputError(f"negative probability mass: {values.min()}")
        total = values.sum()
        if abs(total - 1.0) > TOLERANCE:
            raise InputError(f"probabilities sum to {total}, not 1")
        self._values = np.clip(values, 0.0, None)

    @classmethod
    def normalized(cls, weights):
        """Scale nonnegative ``weights`` onto the simplex."""
        weights = np.clip(np.asarray(weights, dtype=float), 0.0, None)
        total = weights.sum()
        if total <= 0:
            raise InputError("cannot normalize a zero vector")
        return cls(weights / total)

    @classmethod
    def uniform(cls, size: int):
        """Uniform distribution over ``size`` entries."""
        return cls(np.full(size, 1.0 / size))

    @classmethod
    def point_mass(cls, size: int, index: int):
        """All mass on ``index``."""
        values = np.zeros(size)
        values[index] = 1.0
        return cls(values)

    def support(self, tol: float = 0.0) -> List[int]:
        """Indices with mass above ``tol``."""
        return [int(i) for i in np.flatnonzero(self._values > tol)]

    def __len__(self) -> int:
        return self._values.size

    def __getitem__(self, index) -> float:
        return float(self._values[index])


class ElementDistribution(_Simplex):
    """Probability distribution over the universe."""

    @property
    def mass(self) -> np.ndarray:
        """Mass per element."""
        return self._values

    def sample(self, rng: np.random.Generator) -> int:
        """Draw one element."""
        return int(rng.choice(self._values.size, p=self._values / self._values.sum()))

    def __repr__(self) -> str:
        return f"ElementDistribution({dict((v, self[v]) for v in self.support())})"


class ColorWeights(_Simplex):
    """Probability distribution over colors."""

    @property
    def weight(self) -> np.ndarray:
        """Weight per color."""
        return self._values

    def __repr__(self) -> str:
        return f"ColorWeights({self._values.tolist()})"


def _members_of(subset) -> Tuple[int, ...]:
    if isinstance(subset, ElementSet):
        return subset.members
    return tuple(int(v) for v in subset)


class SubmodularOracle:
    """Monotone submodular set function with evaluation accounting.

    Every call of :meth:`value` counts as one evaluation. The oracle keeps
    ``f(S)`` of the current partial solution (see :meth:`current_value`);
    ``f(∅)`` is computed once at construction, where it is also validated,
    and is served without counting.
    """

    def __init__(self, n: int, name: str = ""):
        """Init; subclasses set up their data before calling this."""
        self.universe = Universe(n)
        self.name = name or type(self).__name__
        self.calls = 0
        self._deadline: Optional[float] = None
        self._current: Optional[Tuple[frozenset, float]] = None
        self.empty_value = float(self._evaluate(()))
        if self.empty_value < 0:
            raise InstanceError(f"{self.name}: f(∅) = {self.empty_value} is negative")

    @property
    def n(self) -> int:
        """Universe size."""
        return self.universe.n

    def _evaluate(self, members: Tuple[int, ...]) -> float:
        """Compute f for a duplicate-free tuple of elements."""
        raise NotImplementedError

    def value(self, subset) -> float:
        """Evaluate ``f(subset)``; counts one evaluation."""
        members = _members_of(subset)
        for v in members:
            self.universe.check(v)
        if self._deadline is not None and time.monotonic() > self._deadline:
            raise TimeLimitExceeded(f"{self.name}: deadline passed")
        self.calls += 1
        return float(self._evaluate(members))

    def current_value(self, subset: ElementSet) -> float:
        """Return ``f(subset)``, reusing the cached partial-solution value."""
        if not len(subset):
            return self.empty_value
        if self._current is not None and self._current[0] == subset.key:
            return self._current[1]
        value = self.value(subset)
        self._current = (subset.key, value)
        return value

    def remember(self, subset: ElementSet, value: float) -> None:
        """Record a known ``f(subset)`` as the current partial-solution value."""
        self._current = (subset.key, float(value))

    def set_deadline(self, deadline: Optional[float]) -> None:
        """Raise TimeLimitExceeded on evaluations after ``deadline``."""
        self._deadline = deadline

    def reset(self) -> None:
        """Zero the counter and drop the partial-solution cache."""
        self.calls = 0
        self._current = None

    def clone(self) -> "SubmodularOracle":
        """Copy sharing the immutable data, with fresh accounting."""
        twin = copy.copy(self)
        twin.reset()
        return twin

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name} n={self.n} calls={self.calls}>"


class FoldingOracle(SubmodularOracle):
    """Oracle whose value is a score of a state built one element at a time.

    The state of the prefix ``members[:-1]`` is kept, so evaluating
    ``S ∪ {v}`` for many ``v`` and a fixed ``S`` folds a single element.
    """

    def __init__(self, n: int, name: str = ""):
        """Init."""
        self._prefix: Optional[Tuple[frozenset, object]] = None
        super().__init__(n, name)

    def _initial_state(self):
        raise NotImplementedError

    def _fold(self, state, v: int):
        """Return a new state with ``v`` added; ``state`` is left untouched."""
        raise NotImplementedError

    def _score(self, state) -> float:
        raise NotImplementedError

    def _state_of(self, members: Sequence[int]):
        state = self._initial_state()
        for v in members:
            state = self._fold(state, v)
        return state

    def _evaluate(self, members):
        if not members:
            return self._score(self._initial_state())
        prefix, last = members[:-1], members[-1]
        key = frozenset(prefix)
        if self._prefix is None or self._prefix[0] != key:
            self._prefix = (key, self._state_of(prefix))
        return self._score(self._fold(self._prefix[1], last))

    def reset(self) -> None:
        """Zero the counter and drop caches."""
        super().reset()
        self._prefix = None


class ShiftedOracle(SubmodularOracle):
    """``f(A ∪ T)`` for a fixed set ``T``."""

    def __init__(self, base: SubmodularOracle, fixed: ElementSet):
        """Init."""
        self.base = base
        self.fixed = fixed
        super().__init__(base.n, f"{base.name}+T")
        self._deadline = base._deadline  # pylint: disable=W0212

    def _evaluate(self, members):
        combined = self.fixed.members + tuple(v for v in members if v not in self.fixed)
        return self.base._evaluate(combined)  # pylint: disable=W0212

    def clone(self) -> "ShiftedOracle":
        """Copy with a cloned base oracle."""
        twin = super().clone()
        twin.base = self.base.clone()
        return twin


def marginal_gain(
    oracle: SubmodularOracle, v: int, subset: ElementSet, base: Optional[float] = None
) -> float:
    """Return ``f(v | subset)``.

    Costs two evaluations, or one when ``base`` (or the cached
    partial-solution value) supplies ``f(subset)``. Elements already in
    ``subset`` have zero gain and cost nothing.
    """
    oracle.universe.check(v)
    if v in subset:
        return 0.0
    if base is None:
        base = oracle.current_value(subset)
    return max(oracle.value(subset.add(v)) - base, 0.0)


class MultiObjectiveInstance:
    """One monotone submodular oracle per color on a shared universe."""

    def __init__(self, oracles: Sequence[SubmodularOracle], name: str = "instance"):
        """Init."""
        if not oracles:
            raise InstanceError("an instance needs at least one oracle")
        sizes = {oracle.n for oracle in oracles}
        if len(sizes) != 1:
            raise InstanceError(f"oracles disagree on the universe size: {sorted(sizes)}")
        self.name = name
        self.oracles: List[SubmodularOracle] = list(oracles)
        self.universe = Universe(sizes.pop())
        self.colors = ColorSet(len(self.oracles))
        self.labels: Optional[List[str]] = None

    @property
    def n(self) -> int:
        """Universe size."""
        return self.universe.n

    @property
    def k(self) -> int:
        """Number of colors."""
        return self.colors.k

    def values(self, subset) -> np.ndarray:
        """``f_c(subset)`` for every color; ``k`` evaluations."""
        return np.array([oracle.value(subset) for oracle in self.oracles])

    def current_values(self, subset: ElementSet) -> np.ndarray:
        """``f_c(subset)`` for every color through the oracles' caches."""
        return np.array([oracle.current_value(subset) for oracle in self.oracles])

    def element_labels(self, subset) -> List[Union[int, str]]:
        """Input node labels of ``subset``; plain indices without ``labels``."""
        members = _members_of(subset)
        if self.labels is None:
            return list(members)
        return [self.labels[v] for v in members]

    def total_calls(self) -> int:
        """Evaluations summed over colors."""
        return sum(oracle.calls for oracle in self.oracles)

    def call_counts(self) -> Dict[int, int]:
        """Evaluations per color."""
        return {c: oracle.calls for c, oracle in enumerate(self.oracles)}

    def reset(self) -> None:
        """Zero all counters and caches."""
        for oracle in self.oracles:
            oracle.reset()

    def set_deadline(self, deadline: Optional[float]) -> None:
        """Propagate a run deadline to every oracle."""
        for oracle in self.oracles:
            oracle.set_deadline(deadline)

    def clone(self) -> "MultiObjectiveInstance":
        """Instance over cloned oracles (shared data, fresh accounting)."""
        return MultiObjectiveInstance([o.clone() for o in self.oracles], self.name)

    def absorb(self, other: "MultiObjectiveInstance") -> None:
        """Add the counters of a clone into this instance."""
        for mine, theirs in zip(self.oracles, other.oracles):
            mine.calls += theirs.calls

    def shifted(self, fixed: ElementSet) -> "MultiObjectiveInstance":
        """Instance of the functions ``A -> f_c(A ∪ fixed)``."""
        return MultiObjectiveInstance(
            [ShiftedOracle(oracle, fixed) for oracle in self.oracles],
            f"{self.name}|T={len(fixed)}",
        )

    def __repr__(self) -> str:
        return f"<MultiObjectiveInstance {self.name} n={self.n} k={self.k}>"


def min_value(instance: MultiObjectiveInstance, subset) -> Tuple[float, int]:
    """Return ``min_c f_c(subset)`` and the lowest-index color attaining it."""
    values = instance.values(subset)
    color = int(np.argmin(values))
    return float(values[color]), color


def brute_force_opt(
    instance: MultiObjectiveInstance, budget: int
) -> Tuple[ElementSet, float]:
    """Exact maximizer of ``min_c f_c(S)`` over ``|S| <= budget``.

    By monotonicity only sets of size ``min(budget, n)`` are enumerated, in
    lexicographic order; the first maximizer wins.
    """
    if budget < 0:
        raise InputError(f"negative budget {budget}")
    size = min(budget, instance.n)
    count = math.comb(instance.n, size)
    if count > BRUTE_FORCE_LIMIT:
        raise SizeError(
            f"C({instance.n}, {size}) = {count} subsets exceeds {BRUTE_FORCE_LIMIT}"
        )
    best, best_value = ElementSet(), -math.inf
    for combo in itertools.combinations(range(instance.n), size):
        value = float(instance.values(combo).min())
        if value > best_value:
            best, best_value = ElementSet(combo), value
    _LOGGER.debug("brute force over %d subsets: OPT=%s", count, best_value)
    return best, best_value
