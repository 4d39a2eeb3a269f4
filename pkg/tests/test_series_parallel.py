"""Tests for the series-parallel solver"""

import numpy as np
import pytest

from pyfareinspection.errors import NotSeriesParallelError
from pyfareinspection.followers import solve_nonadaptive_exact
from pyfareinspection.network import Commodity, Instance, Network
from pyfareinspection.series_parallel import (SPTree, commodity_subgraph,
                                              find_paths, solve_nonadaptive_sp,
                                              sp_decompose)

from .sample_data import (EXAMPLE_ARCS, EXAMPLE_NODES, diamond_with_chord,
                          example_instance, example_strategy,
                          random_probabilities, random_sp_instance,
                          two_edge_instance)


def test_decompose_example():
    """Test the decomposition tree of the three node example"""
    net = example_instance().network
    tree = sp_decompose(net, 's', 't')
    assert repr(tree) == 'series(e0, parallel(e1, e2))'
    assert tree.edges() == (0, 1, 2)
    assert tree.min_edge == 0


def test_tree_helpers():
    """Test ordering of parallel children"""
    tree = SPTree.parallel(SPTree.leaf(4), SPTree.leaf(2))
    assert repr(tree) == 'parallel(e2, e4)'
    assert repr(SPTree.series(SPTree.leaf(4), SPTree.leaf(2))) == \
        'series(e4, e2)'


def test_not_series_parallel():
    """Test the error of the diamond with a chord"""
    net = diamond_with_chord()
    with pytest.raises(NotSeriesParallelError) as e:
        sp_decompose(net, 's', 't')
    assert 'not series-parallel' in str(e.value)
    assert str(e.value) == ('Graph between "s" and "t" is not '
                            'series-parallel, irreducible edges: '
                            '[0, 1, 2, 3, 4]')
    assert e.value.witness == [0, 1, 2, 3, 4]


def test_commodity_subgraph():
    """Test that edges off every source-target path are ignored"""
    arcs = EXAMPLE_ARCS + [('t', 's', 1.0), ('v', 'v', 0.0),
                           ('v', 'w', 1.0)]
    net = Network.from_arcs(EXAMPLE_NODES + ['w'], arcs)
    assert commodity_subgraph(net, 0, 2) == [0, 1, 2]
    assert repr(sp_decompose(net, 's', 't')) == \
        'series(e0, parallel(e1, e2))'


def test_example_value():
    """Test the series-parallel solver on the three node example"""
    result = solve_nonadaptive_sp(example_instance(), example_strategy(), 0)
    assert result.cost_value == 2.0
    assert result.path == (0, 1)
    assert result.variant == 'n'


def test_two_edges():
    """Test that the safe detour beats the inspected free edge"""
    instance, strategy = two_edge_instance()
    result = solve_nonadaptive_sp(instance, strategy, 0)
    assert result.cost_value == 1.0
    assert result.path == (1,)

    # Without a fine the free edge wins
    net = instance.network
    free = Instance(net, [Commodity(0, 1, 1.0, 0.0)], 0.0, 1.0)
    result = solve_nonadaptive_sp(free, strategy, 0)
    assert result.cost_value == 0.0
    assert result.path == (0,)


def test_find_paths_intervals():
    """Test the survival ranges of the two candidates of the example"""
    net = example_instance().network
    tree = sp_decompose(net, 's', 't')
    candidates = find_paths(tree, net, example_strategy(), 2.0)
    ranges = sorted((x.label.path, x.lower, x.upper) for x in candidates)
    assert ranges == [((0, 1), 0.0, 0.0), ((0, 2), 0.5, 1.0)]


def test_matches_exact():
    """Test the series-parallel solver against the Pareto enumeration"""
    rng = np.random.default_rng(21)
    for _ in range(200):
        instance = random_sp_instance(rng, n_edges=int(rng.integers(2, 14)))
        strategy = random_probabilities(rng, instance.network.n_edges)
        sp = solve_nonadaptive_sp(instance, strategy, 0)
        exact = solve_nonadaptive_exact(instance, strategy, 0)
        assert sp.cost_value == pytest.approx(exact.cost_value, abs=1e-9)


def test_candidates_bounded_by_edges():
    """Test that the recursion keeps at most one candidate per edge"""
    rng = np.random.default_rng(22)
    for _ in range(100):
        instance = random_sp_instance(rng, n_edges=12)
        net = instance.network
        strategy = random_probabilities(rng, net.n_edges)
        tree = sp_decompose(net, 's', 't')
        candidates = find_paths(tree, net, strategy, instance.fine)
        assert 1 <= len(candidates) <= len(tree.edges())
