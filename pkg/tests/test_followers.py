"""Tests for the best-response solvers of the passengers"""

import math

import numpy as np
import pytest

from pyfareinspection.errors import (InvalidEpsilonError, InvalidPathError,
                                     InvalidVariantError, OracleLimitError)
from pyfareinspection.followers import (brute_force_oracle, f_adaptive,
                                        f_nonadaptive, pareto_frontier,
                                        solve_adaptive,
                                        solve_nonadaptive_exact,
                                        solve_nonadaptive_fptas)
from pyfareinspection.network import InspectionStrategy, evaluate_path

from .sample_data import (EXAMPLE_P1, EXAMPLE_P2, example_instance,
                          example_strategy, random_instance,
                          random_probabilities)


def _random_cases(seed, count, **kwargs):
    """Random instances with random strategies"""
    rng = np.random.default_rng(seed)
    for _ in range(count):
        instance = random_instance(rng, **kwargs)
        yield instance, random_probabilities(rng, instance.network.n_edges)


def test_cost_functions_example():
    """Test both cost functions on the three node example"""
    instance, strategy = example_instance(), example_strategy()
    net = instance.network
    assert f_nonadaptive(net, strategy, 2.0, EXAMPLE_P1) == 2.0
    assert f_nonadaptive(net, strategy, 2.0, EXAMPLE_P2) == 2.0
    assert f_adaptive(net, strategy, 2.0, EXAMPLE_P2, 't') == 1.5
    assert f_adaptive(net, strategy, 2.0, EXAMPLE_P1, 2) == 2.0

    # Without inspections both give the cost of the path
    zero = InspectionStrategy.zeros(3)
    assert f_nonadaptive(net, zero, 2.0, EXAMPLE_P2) == 1.0
    assert f_adaptive(net, zero, 2.0, EXAMPLE_P2, 't') == 1.0


def test_cost_functions_invalid_path():
    """Test that edge sequences with gaps are refused"""
    instance = example_instance()
    with pytest.raises(InvalidPathError) as e:
        f_nonadaptive(instance.network, example_strategy(), 2.0, (1, 2))
    assert str(e.value) == ('Edge sequence [1, 2] is not a connected walk: '
                            'edge 2 does not start where edge 1 ends')
    with pytest.raises(InvalidPathError) as e:
        f_adaptive(instance.network, example_strategy(), 2.0, (0, 7), 't')
    assert str(e.value) == ('Edge sequence [0, 7] is not a connected walk: '
                            'unknown edge 7')


def test_exact_example():
    """Test the exact non-adaptive solver on the three node example"""
    result = solve_nonadaptive_exact(example_instance(), example_strategy(),
                                     0)
    assert result.cost_value == 2.0
    assert result.variant == 'n'
    frontier = sorted((x.cost, x.survival) for x in result.frontier)
    assert frontier == [(0.0, 0.0), (1.0, 0.5)]
    # Both paths tie, the smaller edge sequence wins
    assert result.path == EXAMPLE_P1


def test_exact_without_inspections():
    """Test that the frontier collapses to a shortest path"""
    instance = example_instance()
    result = solve_nonadaptive_exact(instance, InspectionStrategy.zeros(3), 0)
    assert result.cost_value == 0.0
    assert len(result.frontier) == 1
    assert result.frontier[0].path == EXAMPLE_P1


def test_adaptive_example():
    """Test the adaptive solver on the three node example"""
    result = solve_adaptive(example_instance(), example_strategy(), 0)
    assert result.path == EXAMPLE_P2
    assert result.cost_value == 1.5
    assert result.variant == 'a'
    assert result.labels.phi[2] == 0.0
    assert result.labels.phi[0] == 1.5
    assert result.labels.settled == frozenset({0, 1, 2})


def test_adaptive_without_inspections():
    """Test that adaptive followers take a shortest path when uninspected"""
    rng = np.random.default_rng(3)
    for _ in range(20):
        instance = random_instance(rng)
        zero = InspectionStrategy.zeros(instance.network.n_edges)
        result = solve_adaptive(instance, zero, 0)
        assert result.cost_value == pytest.approx(instance.sp_cost(0),
                                                  abs=1e-9)


def test_adaptive_unreachable_nodes():
    """Test that labels are infinite exactly where the target is unreachable"""
    for instance, strategy in _random_cases(5, 30):
        labels = solve_adaptive(instance, strategy, 0).labels
        dist = instance.dist_to_target(0)
        assert np.array_equal(np.isfinite(labels.phi), np.isfinite(dist))


def test_oracle_example():
    """Test the brute-force oracle on the three node example"""
    instance, strategy = example_instance(), example_strategy()
    assert brute_force_oracle(instance, strategy, 0, 'n').cost_value == 2.0
    assert brute_force_oracle(instance, strategy, 0, 'a').cost_value == 1.5
    with pytest.raises(InvalidVariantError) as e:
        brute_force_oracle(instance, strategy, 0, 'x')
    assert str(e.value) == 'Invalid variant "x", should be one of n, a'


def test_oracle_guard():
    """Test that the enumeration stops on large networks"""
    rng = np.random.default_rng(11)
    instance = random_instance(rng, n_nodes=16, n_edges=80)
    strategy = InspectionStrategy.zeros(instance.network.n_edges)
    with pytest.raises(OracleLimitError) as e:
        brute_force_oracle(instance, strategy, 0, 'n', limit=10)
    assert str(e.value) == ('Brute-force guard exceeded: 16 nodes and more '
                            'than 10 simple paths')


def test_exact_matches_oracle():
    """Test exact non-adaptive solver against path enumeration"""
    for instance, strategy in _random_cases(1, 200):
        exact = solve_nonadaptive_exact(instance, strategy, 0)
        oracle = brute_force_oracle(instance, strategy, 0, 'n')
        assert exact.cost_value == pytest.approx(oracle.cost_value, abs=1e-9)
        # The reported value belongs to the reported path
        assert f_nonadaptive(instance.network, strategy, instance.fine,
                             exact.path) == pytest.approx(exact.cost_value,
                                                          abs=1e-9)


def test_frontier_is_antichain():
    """Test that no frontier label dominates another"""
    for instance, strategy in _random_cases(2, 100):
        k = instance.commodities[0]
        frontier = pareto_frontier(instance.network, strategy, k.source,
                                   k.target)
        for a in frontier:
            for b in frontier:
                if a is not b:
                    assert not (a.cost <= b.cost and
                                a.survival >= b.survival)


def test_frontier_bound():
    """Test that labels above the cost bound are dropped"""
    instance, strategy = example_instance(), example_strategy()
    net = instance.network
    frontier = pareto_frontier(net, strategy, 0, 2, bound=0.5,
                               to_target=instance.dist_to_target(0))
    assert [x.path for x in frontier] == [EXAMPLE_P1]
    frontier = pareto_frontier(net, strategy, 0, 2, bound=1.0,
                               to_target=instance.dist_to_target(0))
    assert [x.path for x in frontier] == [EXAMPLE_P1, EXAMPLE_P2]


def test_bounded_frontier_keeps_ties():
    """Test that the bounded frontier of the exact solver holds every label
    within tolerance of the best value"""
    for instance, strategy in _random_cases(5, 200):
        k, fine = instance.commodities[0], instance.fine
        result = solve_nonadaptive_exact(instance, strategy, 0)
        full = pareto_frontier(instance.network, strategy, k.source,
                               k.target)

        def near(labels):
            return sorted(x.path for x in labels
                          if x.cost + (1 - x.survival) * fine <=
                          result.cost_value + 1e-9)
        assert near(result.frontier) == near(full)


def test_adaptive_matches_oracle():
    """Test adaptive solver against path enumeration"""
    for instance, strategy in _random_cases(4, 200):
        result = solve_adaptive(instance, strategy, 0)
        oracle = brute_force_oracle(instance, strategy, 0, 'a')
        assert result.cost_value == pytest.approx(oracle.cost_value,
                                                  abs=1e-9)


def test_fptas_example():
    """Test the approximation scheme on the three node example"""
    instance, strategy = example_instance(), example_strategy()
    result = solve_nonadaptive_fptas(instance, strategy, 0, 0.1)
    assert 2.0 <= result.cost_value <= 2.2
    zero = InspectionStrategy.zeros(3)
    assert solve_nonadaptive_fptas(instance, zero, 0, 0.5).cost_value == 0.0


def test_fptas_invalid_epsilon():
    """Test that epsilon must be positive"""
    with pytest.raises(InvalidEpsilonError) as e:
        solve_nonadaptive_fptas(example_instance(), example_strategy(), 0, 0)
    assert str(e.value) == 'Epsilon must be positive, got "0"'


@pytest.mark.parametrize('epsilon', [0.05, 0.1, 0.5])
def test_fptas_guarantee(epsilon):
    """Test the approximation factor against path enumeration"""
    for instance, strategy in _random_cases(6, 100, n_nodes=10,
                                            n_edges=20):
        result = solve_nonadaptive_fptas(instance, strategy, 0, epsilon)
        oracle = brute_force_oracle(instance, strategy, 0, 'n')
        assert result.cost_value >= oracle.cost_value - 1e-9
        assert result.cost_value <= (1 + epsilon) * oracle.cost_value + 1e-9


def test_fptas_without_inspections():
    """Test that uninspected networks give the shortest path cost"""
    for instance, _ in _random_cases(7, 20):
        zero = InspectionStrategy.zeros(instance.network.n_edges)
        result = solve_nonadaptive_fptas(instance, zero, 0, 0.3)
        assert result.cost_value == pytest.approx(instance.sp_cost(0),
                                                  abs=1e-9)


def test_adaptive_never_worse_per_path():
    """Test that adapting never costs more on the same path"""
    for instance, strategy in _random_cases(8, 100):
        net, fine = instance.network, instance.fine
        target = instance.commodities[0].target
        path = solve_nonadaptive_exact(instance, strategy, 0).path
        assert f_adaptive(net, strategy, fine, path, target) <= \
            f_nonadaptive(net, strategy, fine, path) + 1e-9


def test_adaptive_decomposition():
    """Test that the adaptive cost splits at every node of the path"""
    for instance, strategy in _random_cases(9, 200):
        net, fine = instance.network, instance.fine
        target = instance.commodities[0].target
        path = brute_force_oracle(instance, strategy, 0, 'n').path
        total = f_adaptive(net, strategy, fine, path, target)
        for i in range(1, len(path)):
            head, tail = path[:i], path[i:]
            survival = evaluate_path(net, strategy, head).survival
            split = f_adaptive(net, strategy, fine, head, target) + \
                survival * f_adaptive(net, strategy, fine, tail, target)
            assert total == pytest.approx(split, abs=1e-9)


def test_adaptive_suffix_optimality():
    """Test that every suffix of the adaptive path is optimal from its start"""
    for instance, strategy in _random_cases(10, 200):
        net, fine = instance.network, instance.fine
        target = instance.commodities[0].target
        result = solve_adaptive(instance, strategy, 0)
        for i, e in enumerate(result.path):
            v = net.edges[e].tail
            value = f_adaptive(net, strategy, fine, result.path[i:], target)
            assert value == pytest.approx(result.labels.phi[v], abs=1e-9)


def test_adaptivity_gap():
    """Test that adapting saves at most a quarter of the cost"""
    for instance, strategy in _random_cases(12, 500, n_nodes=6,
                                            n_edges=12):
        opt_n = solve_nonadaptive_exact(instance, strategy, 0).cost_value
        opt_a = solve_adaptive(instance, strategy, 0).cost_value
        sp = instance.sp_cost(0)
        assert opt_a <= opt_n + 1e-9
        assert opt_n <= 4 / 3 * opt_a + 1e-9
        assert opt_n - sp <= 4 / 3 * (opt_a - sp) + 1e-9


def test_survival_sum_sandwich():
    """Test that the fine probability is close to the probability sum"""
    for instance, strategy in _random_cases(13, 1000, n_nodes=6,
                                            n_edges=10):
        path = instance.sp_path(0)
        label = evaluate_path(instance.network, strategy, path)
        total = min(sum(strategy[e] for e in path), 1.0)
        assert 1 - label.survival <= total + 1e-9
        assert total <= (1 - label.survival) / (1 - math.exp(-1)) + 1e-9
