"""Tests for the shared abstractions and evaluation accounting."""
import time

import networkx as nx
import numpy as np
import pytest

from momax import (
    ColorWeights,
    ElementDistribution,
    ElementSet,
    MultiObjectiveInstance,
    Universe,
    brute_force_opt,
    marginal_gain,
    min_value,
)
from momax.algorithms.lp_greedy import lp_greedy_full_pipeline
from momax.exceptions import InputError, InstanceError, SizeError, TimeLimitExceeded
from momax.objectives.coverage import CoverInstance

from tests.common import (
    ModularOracle,
    OffsetOracle,
    exhaustive_opt,
    modular_instance,
    random_chain,
    random_cover,
)


def test_universe_rejects_empty():
    """Test a universe needs an element."""
    with pytest.raises(InputError):
        Universe(0)


def test_element_set_order_and_identity():
    """Test insertion order is kept and equality ignores it."""
    subset = ElementSet([3, 1]).add(2)
    assert subset.members == (3, 1, 2)
    assert subset == ElementSet([1, 2, 3])
    assert 2 in subset and 0 not in subset
    assert subset.union([2, 0, 0]).members == (3, 1, 2, 0)


def test_element_set_duplicates():
    """Test duplicates are refused."""
    with pytest.raises(InputError):
        ElementSet([1, 1])
    with pytest.raises(InputError):
        ElementSet([1]).add(1)


@pytest.mark.parametrize(
    "weights", [[1, 1, 1], [0.2, 0.0, 5.0], [1e-6, 3e6], [7.0]]
)
def test_distribution_normalized(weights):
    """Test normalization lands on the simplex."""
    dist = ElementDistribution.normalized(weights)
    assert abs(dist.mass.sum() - 1.0) <= 1e-9
    assert (dist.mass >= 0).all()


def test_distribution_validation():
    """Test invalid probability vectors."""
    with pytest.raises(InputError):
        ElementDistribution([0.5, 0.6])
    with pytest.raises(InputError):
        ElementDistribution([1.5, -0.5])
    with pytest.raises(InputError):
        ColorWeights.normalized([0.0, 0.0])


def test_distribution_sample_respects_support(rng):
    """Test sampling never leaves the support."""
    dist = ElementDistribution([0.0, 0.25, 0.0, 0.75])
    draws = {dist.sample(rng) for _ in range(200)}
    assert draws <= {1, 3}
    assert dist.support() == [1, 3]
    assert ElementDistribution.point_mass(4, 2).support() == [2]


def test_calls_match_evaluations():
    """Test the counter equals the number of evaluations run."""
    oracle = ModularOracle([1.0, 2.0, 3.0])
    assert oracle.calls == 0
    for subset in ([0], [1, 2], [2], [0, 1, 2], [0]):
        oracle.value(subset)
    assert oracle.calls == 5
    assert len(oracle.evaluated) == oracle.calls


def test_empty_set_is_free():
    """Test f of the empty set costs nothing."""
    oracle = ModularOracle([1.0, 2.0])
    assert oracle.current_value(ElementSet()) == 0.0
    assert marginal_gain(oracle, 1, ElementSet()) == 2.0
    assert oracle.calls == 1


def test_current_value_cache():
    """Test the partial-solution value is evaluated once."""
    oracle = ModularOracle([1.0, 2.0, 4.0])
    subset = ElementSet([0, 1])
    assert oracle.current_value(subset) == 3.0
    assert oracle.current_value(ElementSet([1, 0])) == 3.0
    assert oracle.calls == 1
    oracle.remember(subset.add(2), 7.0)
    assert oracle.current_value(ElementSet([0, 1, 2])) == 7.0
    assert oracle.calls == 1
    oracle.reset()
    assert oracle.calls == 0
    oracle.current_value(subset)
    assert oracle.calls == 1


def test_marginal_gain_cover(path_cover):
    """Test c adds nothing to {b} on the path a-b-c."""
    oracle = path_cover.oracles[0]
    assert marginal_gain(oracle, 2, ElementSet([1])) == 0.0
    assert marginal_gain(oracle, 0, ElementSet([2])) == 1.0


def test_marginal_gain_in_set_costs_nothing():
    """Test elements in the set have zero gain without evaluations."""
    oracle = ModularOracle([1.0, 2.0])
    assert marginal_gain(oracle, 1, ElementSet([1])) == 0.0
    assert oracle.calls == 0


def test_marginal_gain_out_of_universe():
    """Test elements outside the universe are refused."""
    oracle = ModularOracle([1.0, 2.0])
    with pytest.raises(InputError):
        marginal_gain(oracle, 2, ElementSet())
    with pytest.raises(InputError):
        oracle.value([5])


def test_negative_empty_value():
    """Test negative f of the empty set is refused."""
    with pytest.raises(InstanceError):
        OffsetOracle([1.0], -1.0)


def test_positive_empty_value_kept():
    """Test positive f of the empty set is used unshifted."""
    oracle = OffsetOracle([1.0, 2.0], 3.0)
    assert oracle.empty_value == 3.0
    assert oracle.value([1]) == 5.0


def test_deadline():
    """Test evaluations after the deadline raise."""
    oracle = ModularOracle([1.0])
    oracle.set_deadline(time.monotonic() - 1)
    with pytest.raises(TimeLimitExceeded):
        oracle.value([0])
    oracle.set_deadline(None)
    assert oracle.value([0]) == 1.0


def test_shifted_instance_keeps_deadline():
    """Test oracles of A -> f(A ∪ T) honour the deadline of the base oracles."""
    instance = random_cover(12, 2, 0.4, seed=3)
    instance.set_deadline(time.monotonic() - 1)
    shifted = instance.shifted(ElementSet([0]))
    for oracle in shifted.oracles + shifted.clone().oracles:
        with pytest.raises(TimeLimitExceeded):
            oracle.value([1])


def test_full_pipeline_times_out():
    """Test the LP phase after pre-processing stops at the deadline."""
    instance = random_cover(12, 2, 0.4, seed=3)
    instance.set_deadline(time.monotonic() - 1)
    with pytest.raises(TimeLimitExceeded):
        lp_greedy_full_pipeline(instance, 4, per_color_budget=0, mwu_iterations=5)


def test_instance_rejects_mismatched_universe():
    """Test oracles must share the universe."""
    with pytest.raises(InstanceError):
        MultiObjectiveInstance([ModularOracle([1.0]), ModularOracle([1.0, 2.0])])
    with pytest.raises(InstanceError):
        MultiObjectiveInstance([])


def test_clone_and_absorb(modular):
    """Test clones count separately and fold back into the original."""
    twin = modular.clone()
    twin.values([0, 1])
    assert twin.total_calls() == 2
    assert modular.total_calls() == 0
    modular.absorb(twin)
    assert modular.call_counts() == {0: 1, 1: 1}


def test_shifted_instance(modular):
    """Test shifted objectives add the fixed set."""
    shifted = modular.shifted(ElementSet([0]))
    assert shifted.oracles[0].empty_value == 5.0
    assert shifted.values([2]).tolist() == [5.0, 4.0]
    assert shifted.values([0, 2]).tolist() == [5.0, 4.0]


def test_min_value_empty(modular):
    """Test the empty set gives color 0."""
    assert min_value(modular, ElementSet()) == (0.0, 0)


def test_min_value_single_color():
    """Test one color."""
    instance = modular_instance([[1.0, 2.0]])
    assert min_value(instance, [1]) == (2.0, 0)


def test_min_value_cover():
    """Test the color covering fewer edges is the minimum."""
    first = nx.Graph([(0, 1), (0, 2), (0, 3), (4, 5)])
    second = nx.Graph([(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)])
    instance = CoverInstance([first, second])
    assert min_value(instance, [0]) == (3.0, 0)
    assert min_value(instance, [0, 4]) == (4.0, 0)


def test_min_value_ties_lowest_color():
    """Test ties go to the lowest color."""
    instance = modular_instance([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    assert min_value(instance, [0]) == (0.0, 2)
    assert min_value(instance, [0, 1]) == (1.0, 0)


def test_brute_force_full_budget(small_cover):
    """Test B = n picks the whole universe."""
    subset, value = brute_force_opt(small_cover, small_cover.n)
    assert len(subset) == small_cover.n
    assert value == small_cover.values(range(small_cover.n)).min()


def test_brute_force_empty_budget():
    """Test B = 0 gives the empty set."""
    instance = MultiObjectiveInstance([OffsetOracle([1.0], 2.0), OffsetOracle([1.0], 1.0)])
    subset, value = brute_force_opt(instance, 0)
    assert len(subset) == 0
    assert value == 1.0


@pytest.mark.parametrize("seed", range(3))
def test_brute_force_matches_exhaustive(seed):
    """Test the optimum against an enumeration in reverse order."""
    instance = random_cover(8, 3, 0.3, seed)
    subset, value = brute_force_opt(instance, 2)
    assert len(subset) == 2
    assert value == pytest.approx(exhaustive_opt(instance, 2))
    assert instance.values(subset).min() == pytest.approx(value)


def test_brute_force_guard():
    """Test the enumeration guard."""
    instance = modular_instance([np.ones(60)])
    with pytest.raises(SizeError):
        brute_force_opt(instance, 30)


def test_folding_matches_fresh_evaluation(small_cover, rng):
    """Test prefix-cached evaluation agrees with a fresh oracle."""
    oracle = small_cover.oracles[0]
    fresh = small_cover.clone().oracles[0]
    chain = random_chain(small_cover.n, rng)
    for size in range(1, len(chain) + 1):
        prefix = chain[:size]
        for v in range(small_cover.n):
            if v not in prefix:
                covered = fresh.edge_count - fresh.uncovered(prefix + [v])
                assert oracle.value(prefix + [v]) == covered


@pytest.mark.parametrize("seed", range(4))
def test_cover_monotone_submodular(seed):
    """Test monotonicity and submodularity on 50 random triples per seed."""
    instance = random_cover(12, 2, 0.3, seed)
    rng = np.random.default_rng(seed)
    for _ in range(50):
        oracle = instance.oracles[int(rng.integers(instance.k))]
        chain = random_chain(instance.n, rng)
        small = int(rng.integers(0, instance.n - 1))
        large = int(rng.integers(small, instance.n - 1))
        v = chain[-1]
        s, t = ElementSet(chain[:small]), ElementSet(chain[:large])
        assert oracle.value(s) <= oracle.value(t) + 1e-9
        assert marginal_gain(oracle, v, s) >= marginal_gain(oracle, v, t) - 1e-9
