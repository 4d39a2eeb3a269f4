"""Module that reads and writes instances, strategies and solutions"""

import json
import math
from pathlib import Path

from .network import Commodity, Edge, Instance, InspectionStrategy, Network
from .errors import InstanceParseError


def _read_json(stream):
    """
    Decode JSON from text, bytes or a file-like object

    :param str/bytes/file: The input
    :return object: The decoded document
    """
    text = stream.read() if hasattr(stream, 'read') else stream
    if isinstance(text, (bytes, bytearray)):
        try:
            text = text.decode('utf-8')
        except UnicodeDecodeError as e:
            raise InstanceParseError('byte %d' % e.start, 'not UTF-8') from e
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InstanceParseError('line %d column %d' % (e.lineno, e.colno),
                                 e.msg) from e


def _field(data, key, where):
    """Get a mandatory member of a JSON object"""
    if not isinstance(data, dict):
        raise InstanceParseError(where, 'expected an object')
    if key not in data:
        raise InstanceParseError('%s.%s' % (where, key) if where else key,
                                 'missing')
    return data[key]


def _number(value, where):
    """Check a JSON number (booleans are rejected)"""
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InstanceParseError(where, 'expected a number, got %r' % value)
    if not math.isfinite(value):
        raise InstanceParseError(where, 'expected a finite number')
    return float(value)


def _list(value, where):
    """Check a JSON array"""
    if not isinstance(value, list):
        raise InstanceParseError(where, 'expected an array')
    return value


def _node(index, value, where):
    """Translate a node name to its index"""
    if not isinstance(value, str) or value not in index:
        raise InstanceParseError(where, 'unknown node %r' % value)
    return index[value]


def load_instance(stream):
    """
    Parse and validate an instance

    :param str/bytes/file: JSON document of the instance
    :return Instance: The validated instance
    """
    data = _read_json(stream)
    if not isinstance(data, dict):
        raise InstanceParseError('document', 'expected an object')

    nodes = _list(_field(data, 'nodes', ''), 'nodes')
    for i, name in enumerate(nodes):
        if not isinstance(name, str):
            raise InstanceParseError('nodes[%d]' % i, 'expected a string')
    index = {name: i for i, name in enumerate(nodes)}
    if len(index) != len(nodes):
        raise InstanceParseError('nodes', 'node names are not unique')

    edges = []
    for i, e in enumerate(_list(_field(data, 'edges', ''), 'edges')):
        where = 'edges[%d]' % i
        edge_id = _field(e, 'id', where)
        if isinstance(edge_id, bool) or not isinstance(edge_id, int):
            raise InstanceParseError(where + '.id', 'expected an integer')
        edges.append(Edge(edge_id,
                          _node(index, _field(e, 'tail', where),
                                where + '.tail'),
                          _node(index, _field(e, 'head', where),
                                where + '.head'),
                          _number(_field(e, 'cost', where), where + '.cost')))

    positions = data.get('positions')
    if positions is not None:
        if not isinstance(positions, dict):
            raise InstanceParseError('positions', 'expected an object')
        for name, xy in positions.items():
            where = 'positions.%s' % name
            if not isinstance(xy, list) or len(xy) != 2:
                raise InstanceParseError(where, 'expected [x, y]')
            _number(xy[0], where + '[0]')
            _number(xy[1], where + '[1]')

    commodities = []
    for i, k in enumerate(_list(_field(data, 'commodities', ''),
                                'commodities')):
        where = 'commodities[%d]' % i
        commodities.append(Commodity(
            _node(index, _field(k, 'source', where), where + '.source'),
            _node(index, _field(k, 'target', where), where + '.target'),
            _number(_field(k, 'demand', where), where + '.demand'),
            _number(_field(k, 'ticket', where), where + '.ticket')))

    network = Network(nodes, edges, positions)
    return Instance(network, commodities,
                    _number(_field(data, 'fine', ''), 'fine'),
                    _number(_field(data, 'budget', ''), 'budget'))


def load_instance_file(path):
    """
    :param str/Path: Path of the instance JSON file
    :return Instance: The validated instance
    """
    with open(path, 'rb') as f:
        return load_instance(f)


def instance_to_dict(instance):
    """
    :param Instance: The instance
    :return dict: The instance in the file layout
    """
    net = instance.network
    data = {
        'nodes': list(net.nodes),
        'edges': [{'id': e.id, 'tail': net.nodes[e.tail],
                   'head': net.nodes[e.head], 'cost': e.cost}
                  for e in net.edges],
        'commodities': [{'source': net.nodes[k.source],
                         'target': net.nodes[k.target],
                         'demand': k.demand, 'ticket': k.ticket}
                        for k in instance.commodities],
        'fine': instance.fine,
        'budget': instance.budget,
    }
    if net.positions is not None:
        data['positions'] = {k: list(v) for k, v in net.positions.items()}
    return data


def dump_instance(instance):
    """
    :param Instance: The instance
    :return str: JSON document of the instance
    """
    return json.dumps(instance_to_dict(instance), indent=2)


def load_strategy(stream, n_edges):
    """
    Parse a strategy, omitted edges have probability 0

    :param str/bytes/file: JSON document of the strategy
    :param int: Number of edges of the network
    :return InspectionStrategy: The strategy
    """
    data = _read_json(stream)
    mapping = {}
    entries = _list(_field(data, 'probabilities', ''), 'probabilities')
    for i, entry in enumerate(entries):
        where = 'probabilities[%d]' % i
        edge = _field(entry, 'edge', where)
        if isinstance(edge, bool) or not isinstance(edge, int) or \
                not 0 <= edge < n_edges:
            raise InstanceParseError(where + '.edge', 'unknown edge %r' % edge)
        if edge in mapping:
            raise InstanceParseError(where + '.edge', 'duplicate edge %d' % edge)
        mapping[edge] = _number(_field(entry, 'p', where), where + '.p')
    return InspectionStrategy.from_mapping(mapping, n_edges)


def load_strategy_file(path, n_edges):
    """
    :param str/Path: Path of the strategy JSON file
    :param int: Number of edges of the network
    :return InspectionStrategy: The strategy
    """
    return load_strategy(Path(path).read_bytes(), n_edges)


def strategy_to_dict(strategy):
    """
    :param InspectionStrategy: The strategy
    :return dict: The strategy in the file layout
    """
    return {'probabilities': [{'edge': e, 'p': p}
                              for e, p in strategy.to_dict().items()]}


def dump_strategy(strategy):
    """
    :param InspectionStrategy: The strategy
    :return str: JSON document of the strategy
    """
    return json.dumps(strategy_to_dict(strategy), indent=2)


def dump_solution(solution):
    """
    :param LeaderSolution: The solution
    :return str: JSON document of the solution
    """
    data = {
        'variant': str(solution.variant),
        'provenance': solution.provenance,
        'profit': solution.profit,
        'upper_bound': solution.upper_bound,
        'gap': solution.gap,
        'iterations': solution.iterations,
        'history': solution.history,
        'strategy': strategy_to_dict(solution.strategy),
        'commodities': [x.to_dict() for x in solution.breakdown],
    }
    return json.dumps(data, indent=2)


def dump_follower_result(result):
    """
    :param FollowerResult: The best response
    :return str: JSON document with path, value and label
    """
    return json.dumps(result.to_dict(), indent=2)
