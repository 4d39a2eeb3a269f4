"""Tests for the random instance generator"""

import json
import math

import networkx as nx
import numpy as np
import pytest

from pyfareinspection.errors import GeneratorError, InvalidConfigError
from pyfareinspection.generator import (DEFAULT_BUDGETS, MANIFEST,
                                        GeneratorConfig, budget_sweep,
                                        generate_instance, generate_planar,
                                        instance_filename, segments_cross,
                                        write_suite)
from pyfareinspection.serialization import dump_instance, load_instance_file
from pyfareinspection.types import size_classes


def test_segments_cross():
    """Test the crossing predicate"""
    assert segments_cross((0, 0), (1, 1), (0, 1), (1, 0))
    assert not segments_cross((0, 0), (1, 1), (1, 1), (2, 0))
    assert not segments_cross((0, 0), (1, 0), (0, 1), (1, 1))
    assert not segments_cross((0, 0), (1, 1), (2, 2), (3, 0))


def test_segments_cross_rows():
    """Test the crossing predicate on stacked segments"""
    c = np.array([[0, 1], [1, 1], [0, 1]])
    d = np.array([[1, 0], [2, 0], [1, 1]])
    assert segments_cross((0, 0), (1, 1), c, d).tolist() == \
        [True, False, False]


def _crossing_links(net):
    """Number of crossing pairs among the links of the embedded network"""
    points = np.array([net.positions[name] for name in net.nodes])
    links = net.edges[::2]
    a = points[[e.tail for e in links]]
    b = points[[e.head for e in links]]
    return sum(int(segments_cross(a[i], b[i], a[i + 1:], b[i + 1:]).sum())
               for i in range(len(links)))


def test_two_nodes():
    """Test the smallest network"""
    config = GeneratorConfig(n_nodes=2, n_commodities=2)
    instance = generate_instance(config)
    net = instance.network
    assert net.n_nodes == 2
    assert net.n_edges == 2
    assert (net.edges[0].tail, net.edges[0].head) == (0, 1)
    assert (net.edges[1].tail, net.edges[1].head) == (1, 0)
    assert instance.n_commodities == 2
    assert [k.ticket for k in instance.commodities] == [3.0, 3.0]


def test_config_validation():
    """Test errors of invalid generator parameters"""
    with pytest.raises(InvalidConfigError) as e:
        GeneratorConfig(n_nodes=1)
    assert str(e.value) == 'Invalid configuration: at least 2 nodes are needed'
    with pytest.raises(InvalidConfigError) as e:
        GeneratorConfig(fine=2.0)
    assert str(e.value) == ('Invalid configuration: base_price + price_slope '
                            'must not exceed the fine')
    with pytest.raises(GeneratorError) as e:
        generate_instance(GeneratorConfig(n_nodes=3, n_commodities=7))
    assert str(e.value) == \
        'Cannot draw 7 distinct commodities from 6 ordered node pairs'


def test_determinism():
    """Test that the seed fixes the instance"""
    config = GeneratorConfig(n_nodes=15, n_commodities=10, seed=7)
    assert dump_instance(generate_instance(config)) == \
        dump_instance(generate_instance(config))
    other = GeneratorConfig(n_nodes=15, n_commodities=10, seed=8)
    assert dump_instance(generate_instance(config)) != \
        dump_instance(generate_instance(other))


@pytest.mark.parametrize('seed', range(5))
def test_planar_network(seed):
    """Test planarity, connectivity and edge layout of random networks"""
    config = GeneratorConfig(seed=seed)
    net = generate_planar(config)
    n = config.n_nodes
    assert net.n_nodes == n
    assert nx.is_strongly_connected(net.to_networkx())
    assert _crossing_links(net) == 0

    # Links are pairs of opposite edges of equal cost
    assert net.n_edges % 2 == 0
    assert 2 * (n - 1) <= net.n_edges <= 2 * (3 * n - 6)
    scale = config.minutes_per_unit * config.cost_per_minute
    for a, b in zip(net.edges[::2], net.edges[1::2]):
        assert (a.tail, a.head) == (b.head, b.tail)
        assert a.cost == b.cost
        p, q = net.positions[net.nodes[a.tail]], net.positions[net.nodes[a.head]]
        assert a.cost == pytest.approx(math.dist(p, q) * scale, abs=1e-12)


def test_size_classes():
    """Test configurations of the size classes"""
    config = GeneratorConfig.for_size_class(size_classes.MEDIUM, seed=4)
    assert (config.n_nodes, config.tag, config.seed) == (50, 'medium', 4)
    assert GeneratorConfig.for_size_class('huge', tag='x').tag == 'x'
    with pytest.raises(InvalidConfigError) as e:
        GeneratorConfig.for_size_class('tiny')
    assert str(e.value) == ('Invalid configuration: unknown size class '
                            '"tiny", should be one of small, medium, large, '
                            'huge')


@pytest.mark.parametrize('name', list(size_classes.NODES))
def test_size_class_networks(name):
    """Test 100 networks of every size class"""
    counts = []
    for seed in range(100):
        net = generate_planar(GeneratorConfig.for_size_class(name, seed=seed))
        assert nx.is_strongly_connected(net.to_networkx())
        assert _crossing_links(net) == 0
        counts.append(net.n_edges)
    expected = size_classes.EXPECTED_EDGES[name]
    assert abs(np.mean(counts) - expected) <= 0.2 * expected


def test_commodities():
    """Test demands, distinct pairs and ticket prices"""
    config = GeneratorConfig(n_nodes=20, n_commodities=30, seed=3)
    instance = generate_instance(config)
    pairs = [(k.source, k.target) for k in instance.commodities]
    assert len(set(pairs)) == 30
    ratios = []
    for i, k in enumerate(instance.commodities):
        assert 1.0 <= k.demand <= 50.0
        assert 1.0 <= k.ticket <= 3.0 + 1e-12
        assert k.ticket <= instance.fine
        ratios.append((k.ticket - 1.0) / instance.sp_cost(i))
    # Ticket grows linearly with the shortest path cost
    assert max(ratios) == pytest.approx(min(ratios), rel=1e-9)
    assert instance.fine == 6.0
    assert instance.budget == 1.0


def test_budget_sweep():
    """Test the default budget sweep"""
    instance = generate_instance(GeneratorConfig(n_nodes=6, n_commodities=4))
    sweep = budget_sweep(instance)
    assert len(sweep) == 20
    assert sweep[0].budget == pytest.approx(0.2)
    assert sweep[-1].budget == pytest.approx(25.0)
    assert [x.budget for x in sweep] == list(DEFAULT_BUDGETS)
    assert budget_sweep(instance, [3.0])[0].budget == 3.0
    with pytest.raises(InvalidConfigError) as e:
        budget_sweep(instance, [])
    assert str(e.value) == 'Invalid configuration: the budget list is empty'


def test_filename():
    """Test names of the instance files"""
    assert instance_filename(GeneratorConfig()) == 'rand_n25_k25_seed0_b1.json'
    config = GeneratorConfig(tag='small', seed=3, budget=2.5)
    assert instance_filename(config) == 'small_n25_k25_seed3_b2.5.json'


def test_write_suite(tmp_path):
    """Test writing a suite with its manifest"""
    config = GeneratorConfig(n_nodes=8, n_commodities=5, seed=10)
    paths = write_suite(config, 3, tmp_path / 'suite')
    assert [p.name for p in paths] == ['rand_n8_k5_seed10_b1.json',
                                       'rand_n8_k5_seed11_b1.json',
                                       'rand_n8_k5_seed12_b1.json']
    manifest = json.loads((tmp_path / 'suite' / MANIFEST).read_text())
    assert manifest['count'] == 3
    assert [x['seed'] for x in manifest['instances']] == [10, 11, 12]
    assert manifest['instances'][0]['config']['n_nodes'] == 8
    instance = load_instance_file(paths[1])
    assert instance.network.n_nodes == 8
    assert instance.n_commodities == 5

    assert write_suite(config, 0, tmp_path / 'empty') == []
    manifest = json.loads((tmp_path / 'empty' / MANIFEST).read_text())
    assert manifest == {'count': 0, 'instances': []}
