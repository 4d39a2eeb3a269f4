"""Tests for the revenue of the leader"""

import itertools

import numpy as np
import pytest

from pyfareinspection.errors import InvalidStrategyError, InvalidVariantError
from pyfareinspection.followers import brute_force_oracle
from pyfareinspection.leader import evaluate_profit, revenue
from pyfareinspection.local_search import LocalSearchConfig, local_search
from pyfareinspection.multicut import (find_multicut, is_multicut,
                                      multicut_start)
from pyfareinspection.network import Commodity, Instance, InspectionStrategy
from pyfareinspection.relaxation import solve_relaxation
from pyfareinspection.series_parallel import solve_nonadaptive_sp
from pyfareinspection.types import choices, variants

from .sample_data import (EXAMPLE_P1, EXAMPLE_P2, example_instance,
                          example_strategy, gap_instance, gap_strategy,
                          random_instance, random_probabilities)


def test_fixed_fare_ticket():
    """Test that a cheap ticket is bought"""
    instance, strategy = example_instance(), example_strategy()
    for variant in (variants.FIX_N, variants.FIX_A):
        result = revenue(instance, strategy, 0, variant)
        assert result.gamma == 1.4
        assert result.choice == choices.TICKET
        assert result.path == instance.sp_path(0)


def test_fixed_fare_evasion():
    """Test fines collected from evading adaptive passengers"""
    instance, strategy = example_instance(ticket=2.0), example_strategy()
    result = revenue(instance, strategy, 0, variants.FIX_A)
    assert result.choice == choices.EVADE
    assert result.path == EXAMPLE_P2
    assert result.gamma == 1.0

    # Evasion ties with the ticket, the leader gets the full fine
    result = revenue(instance, strategy, 0, variants.FIX_N)
    assert result.gamma == 2.0


def test_flexible_fare():
    """Test that the flexible ticket equals the willingness to pay"""
    instance, strategy = example_instance(), example_strategy()
    assert revenue(instance, strategy, 0, variants.FLEX_N).gamma == 2.0
    assert revenue(instance, strategy, 0, variants.FLEX_A).gamma == 1.5
    zero = InspectionStrategy.zeros(3)
    for variant in variants.ALL:
        assert revenue(instance, zero, 0, variant).gamma == 0.0
    assert revenue(instance, zero, 0, variants.FLEX_N).choice == \
        choices.TICKET


def test_fixed_fare_gap_instance():
    """Test the instance on which the relaxation misleads fixed fares"""
    size, eps = 10, 0.1
    instance = gap_instance(size, budget=0.5 + eps)
    breakdown = evaluate_profit(instance, gap_strategy(size, 0.5 + eps),
                                variants.FIX_N)
    assert breakdown.total_profit == pytest.approx(1 + 2 * eps, abs=1e-9)
    assert breakdown[0].gamma == 0.0
    assert breakdown[1].choice == choices.EVADE

    breakdown = evaluate_profit(instance, gap_strategy(size, 0.5),
                                variants.FIX_N)
    assert breakdown.total_profit == pytest.approx(size + 1, abs=1e-9)
    assert breakdown[0].choice == choices.EVADE
    assert breakdown[0].path == (size, size + 1, size + 2)


def test_evaluate_profit_checks():
    """Test that invalid strategies and variants are refused"""
    instance = example_instance()
    with pytest.raises(InvalidStrategyError) as e:
        evaluate_profit(instance, InspectionStrategy([1.0, 1.0, 0.0]),
                        variants.FIX_N)
    assert str(e.value) == \
        'Invalid strategy: total probability 2.0 exceeds the budget 1.5'
    with pytest.raises(InvalidVariantError) as e:
        evaluate_profit(instance, example_strategy(), 'fix')
    assert str(e.value) == ('Invalid variant "fix", should be one of '
                            'fix-n, fix-a, flex-n, flex-a')


def test_breakdown():
    """Test the revenue breakdown container"""
    breakdown = evaluate_profit(example_instance(), example_strategy(),
                                variants.FLEX_A)
    assert len(breakdown) == 1
    assert breakdown.total_profit == 1.5
    assert breakdown[0].to_dict() == {'commodity': 0, 'revenue': 1.5,
                                      'choice': choices.TICKET,
                                      'path': list(EXAMPLE_P1)}
    assert [x.index for x in breakdown] == [0]
    assert breakdown['total_profit'] == 1.5


def test_breakdown_to_pandas():
    """Test exporting the revenues to pandas"""
    pytest.importorskip('pandas')
    rng = np.random.default_rng(31)
    instance = random_instance(rng, n_commodities=3)
    strategy = random_probabilities(rng, instance.network.n_edges, 2.0)
    df = evaluate_profit(instance, strategy, variants.FIX_N).to_pandas()
    assert df.shape == (3, 3)
    assert list(df.index) == [0, 1, 2]
    assert set(df.columns) == {'revenue', 'choice', 'path'}


def test_flexible_dominates_fixed():
    """Test that flexible fares earn at least as much as fixed ones"""
    rng = np.random.default_rng(32)
    for _ in range(1000):
        instance = random_instance(rng, n_commodities=3)
        strategy = random_probabilities(rng, instance.network.n_edges,
                                        instance.budget)
        for followers in variants.FOLLOWERS:
            fixed = evaluate_profit(instance, strategy, 'fix-' + followers)
            flex = evaluate_profit(instance, strategy, 'flex-' + followers)
            for a, b in zip(fixed, flex):
                assert a.gamma <= b.gamma + 1e-8


def test_fixed_fare_below_ticket():
    """Test that no passenger pays more than the ticket with fixed fares"""
    rng = np.random.default_rng(35)
    for _ in range(300):
        instance = random_instance(rng, n_commodities=3)
        strategy = random_probabilities(rng, instance.network.n_edges,
                                        instance.budget)
        for variant in (variants.FIX_N, variants.FIX_A):
            breakdown = evaluate_profit(instance, strategy, variant)
            for k, x in zip(instance.commodities, breakdown):
                assert x.gamma <= k.ticket + 1e-8


def test_adaptive_earns_less():
    """Test the flexible revenue sandwich of the two follower models"""
    rng = np.random.default_rng(33)
    for _ in range(500):
        instance = random_instance(rng, n_commodities=3)
        strategy = random_probabilities(rng, instance.network.n_edges,
                                        instance.budget)
        n = evaluate_profit(instance, strategy, variants.FLEX_N)
        a = evaluate_profit(instance, strategy, variants.FLEX_A)
        for x, y in zip(n, a):
            assert y.gamma <= x.gamma + 1e-9
            assert x.gamma <= 4 / 3 * y.gamma + 1e-9


def _solver_outputs(instance, relaxation, variant):
    """Rounded relaxation, multicut start and a short local search"""
    mc = multicut_start(instance)
    yield relaxation.strategy
    yield mc
    yield local_search(instance, variant, mc, config=LocalSearchConfig(
        max_iterations=5), upper_bound=relaxation.bound).strategy


def test_profit_below_relaxation():
    """Test that the relaxation of the fare setting bounds the profit of
    random strategies and of solver outputs"""
    rng = np.random.default_rng(34)
    for _ in range(50):
        instance = random_instance(rng, n_commodities=3)
        bounds = {fares: solve_relaxation(instance, fares=fares)
                  for fares in (variants.FIXED, variants.FLEXIBLE)}
        strategies = [random_probabilities(rng, instance.network.n_edges,
                                           instance.budget)
                      for _ in range(100)]
        for variant in variants.ALL:
            relaxation = bounds[variants.parse_fares(variant)]
            bound = relaxation.bound
            for strategy in itertools.chain(
                    strategies, _solver_outputs(instance, relaxation,
                                                variant)):
                profit = evaluate_profit(instance, strategy,
                                         variant).total_profit
                assert profit <= bound + 1e-6 * (1 + bound)


def test_fptas_revenue():
    """Test revenues with approximate non-adaptive followers"""
    instance, strategy = example_instance(), example_strategy()
    result = revenue(instance, strategy, 0, variants.FLEX_N, epsilon=0.1)
    # The approximate evasion cost is capped by the fine
    assert result.gamma == 2.0


def test_commodity_at_its_source():
    """Test that passengers who stay at their source pay nothing"""
    base = example_instance()
    instance = Instance(base.network, base.commodities +
                        (Commodity(1, 1, 5.0, 1.0),), base.fine, base.budget)
    strategy = example_strategy()
    assert instance.sp_cost(1) == 0.0
    assert instance.sp_path(1) == ()
    for variant in variants.ALL:
        result = revenue(instance, strategy, 1, variant)
        assert result.gamma == 0.0
        assert evaluate_profit(instance, strategy, variant).total_profit == \
            evaluate_profit(base, strategy, variant).total_profit
        assert brute_force_oracle(instance, strategy, 1, variant).path == ()
    assert solve_nonadaptive_sp(instance, strategy, 1).path == ()

    cut = find_multicut(instance)
    assert cut == find_multicut(base)
    assert is_multicut(instance, cut)
    for fares in (variants.FLEXIBLE, variants.FIXED):
        assert solve_relaxation(instance, fares=fares).bound == \
            pytest.approx(solve_relaxation(base, fares=fares).bound)
