"""Module that generates random planar transit networks and instances"""

import dataclasses
import json
import logging
import math
from pathlib import Path

import networkx as nx
import numpy as np

from .errors import GeneratorError, InvalidConfigError
from .network import Commodity, Edge, Instance, Network, dijkstra
from .serialization import dump_instance
from .types import size_classes
from .types.tolerances import TOL

logger = logging.getLogger(__name__)

MANIFEST = 'manifest.json'
# 20 budgets from 0.2 to 25
DEFAULT_BUDGETS = tuple(float(x) for x in np.geomspace(0.2, 25, 20))


@dataclasses.dataclass
class GeneratorConfig:
    """
    Parameters of a random instance

    Attributes
    ----------
    n_nodes : int
        Number of nodes, placed in the unit square
    n_commodities : int
        Number of distinct ordered node pairs with demand
    demand_range : tuple
        Demands are drawn uniformly from this interval
    base_price, price_slope : float
        Ticket of a commodity is base_price + price_slope * SP / max SP
    fine : float
        The fine
    seed : int
        Seed of numpy.random.default_rng
    budget : float
        Budget written into the instance
    budget_list : tuple/None
        Budgets of the sweep, 20 values from 0.2 to 25 if None
    minutes_per_unit : float
        Travel minutes per unit of length, the diagonal takes 60 minutes
    cost_per_minute : float
        Monetary cost of one minute
    tag : str
        Prefix of the file names
    """
    n_nodes: int = 25
    n_commodities: int = 25
    demand_range: tuple = (1.0, 50.0)
    base_price: float = 1.0
    price_slope: float = 2.0
    fine: float = 6.0
    seed: int = 0
    budget: float = 1.0
    budget_list: tuple = None
    minutes_per_unit: float = 60.0 / math.sqrt(2.0)
    cost_per_minute: float = 0.132
    tag: str = 'rand'

    def __post_init__(self):
        if self.n_nodes < 2:
            raise InvalidConfigError('at least 2 nodes are needed')
        if self.n_commodities < 0:
            raise InvalidConfigError('number of commodities is negative')
        low, high = self.demand_range
        if not 0 <= low <= high:
            raise InvalidConfigError('invalid demand range %s' %
                                     (self.demand_range,))
        if self.base_price < 0 or self.price_slope < 0:
            raise InvalidConfigError('prices must be nonnegative')
        if self.base_price + self.price_slope > self.fine + TOL:
            raise InvalidConfigError(
                'base_price + price_slope must not exceed the fine')
        if self.budget < 0:
            raise InvalidConfigError('budget must be nonnegative')

    @classmethod
    def for_size_class(cls, name, **kwargs):
        """
        Configuration of one of the size classes small, medium, large, huge

        :param str: Name of the size class, also the default tag
        :param kwargs: Other fields of the configuration
        :return GeneratorConfig: The configuration
        """
        if name not in size_classes.NODES:
            raise InvalidConfigError(
                'unknown size class "%s", should be one of %s' %
                (name, ', '.join(size_classes.NODES)))
        kwargs.setdefault('tag', name)
        return cls(n_nodes=size_classes.NODES[name], **kwargs)

    @property
    def budgets(self):
        """Budgets of the sweep"""
        if self.budget_list is None:
            return DEFAULT_BUDGETS
        return tuple(float(x) for x in self.budget_list)


def segments_cross(a, b, c, d):
    """
    Check if the segments a-b and c-d cross in their interiors

    Segments sharing an endpoint do not cross. Endpoints may be stacked as
    rows to check many segments at once.

    :param numpy.ndarray: First endpoint of the first segment
    :param numpy.ndarray: Second endpoint of the first segment
    :param numpy.ndarray: First endpoint of the second segment
    :param numpy.ndarray: Second endpoint of the second segment
    :return bool/numpy.ndarray: True if they cross, one value per row
    """
    a, b, c, d = (np.asarray(x, dtype=float) for x in (a, b, c, d))
    shared = np.zeros(np.broadcast_shapes(a.shape, b.shape, c.shape,
                                          d.shape)[:-1], dtype=bool)
    for x in (a, b):
        for y in (c, d):
            shared |= np.all(x == y, axis=-1)
    cross = ~shared & (_orient(a, b, c) * _orient(a, b, d) < 0) & \
        (_orient(c, d, a) * _orient(c, d, b) < 0)
    return bool(cross) if cross.ndim == 0 else cross


def _orient(p, q, r):
    """Orientation signs of r (rows) with respect to p -> q (rows)"""
    return np.sign((q[..., 0] - p[..., 0]) * (r[..., 1] - p[..., 1]) -
                   (q[..., 1] - p[..., 1]) * (r[..., 0] - p[..., 0]))


def _crosses(points, links, u, v):
    """Check the segment u-v against all links without a common node"""
    if not links:
        return False
    ends = np.array(list(links))
    ends = ends[~np.isin(ends, (u, v)).any(axis=1)]
    return bool(segments_cross(points[u], points[v], points[ends[:, 0]],
                               points[ends[:, 1]]).any())


def _join_components(points, links):
    """Link the component of node 0 to the rest until connected"""
    graph = nx.Graph()
    graph.add_nodes_from(range(len(points)))
    graph.add_edges_from(links)
    while not nx.is_connected(graph):
        inside = sorted(nx.node_connected_component(graph, 0))
        outside = sorted(set(graph) - set(inside))
        pairs = sorted((float(np.hypot(*(points[u] - points[v]))), u, v)
                       for u in inside for v in outside)
        chosen = next(((u, v) for _, u, v in pairs
                       if not _crosses(points, links, u, v)), None)
        if chosen is None:
            logger.warning('no crossing-free link joins node 0, '
                           'using the shortest one')
            chosen = pairs[0][1:]
        link = (min(chosen), max(chosen))
        links.add(link)
        graph.add_edge(*link)


def generate_planar(config, rng=None):
    """
    Random transit network embedded without crossings in the unit square

    3n - 6 times a random node is linked to its nearest node it is not yet
    linked to, unless the segment crosses an existing link. Every link
    becomes two opposite edges of equal cost.

    :param GeneratorConfig: The configuration
    :param numpy.random.Generator/None: Random source, seeded from the
        configuration if None
    :return Network: The network with node positions
    """
    rng = np.random.default_rng(config.seed) if rng is None else rng
    n = config.n_nodes
    points = rng.random((n, 2))
    links = set()
    neighbours = [set() for _ in range(n)]

    for _ in range(max(0, 3 * n - 6)):
        u = int(rng.integers(n))
        dist = np.hypot(*(points - points[u]).T)
        dist[u] = np.inf
        dist[list(neighbours[u])] = np.inf
        if not np.isfinite(dist).any():
            continue
        v = int(np.argmin(dist))
        if _crosses(points, links, u, v):
            continue
        links.add((min(u, v), max(u, v)))
        neighbours[u].add(v)
        neighbours[v].add(u)

    _join_components(points, links)

    names = ['v%d' % i for i in range(n)]
    scale = config.minutes_per_unit * config.cost_per_minute
    edges = []
    for u, v in sorted(links):
        cost = float(np.hypot(*(points[u] - points[v]))) * scale
        edges.append(Edge(len(edges), u, v, cost))
        edges.append(Edge(len(edges), v, u, cost))
    positions = {names[i]: (float(x), float(y))
                 for i, (x, y) in enumerate(points)}
    logger.debug('planar network with %d nodes and %d links', n, len(links))
    return Network(names, edges, positions)


def generate_commodities(net, config, rng=None):
    """
    Random commodities on distinct ordered node pairs

    :param Network: Connected network
    :param GeneratorConfig: The configuration
    :param numpy.random.Generator/None: Random source, seeded from the
        configuration if None
    :return list: Commodity instances
    """
    rng = np.random.default_rng(config.seed) if rng is None else rng
    n = net.n_nodes
    pairs = [(s, t) for s in range(n) for t in range(n) if s != t]
    if config.n_commodities > len(pairs):
        raise GeneratorError(config.n_commodities, len(pairs))
    chosen = rng.choice(len(pairs), size=config.n_commodities, replace=False)
    demands = rng.uniform(*config.demand_range, size=config.n_commodities)

    dist = np.array([dijkstra(net, net.costs, s)[0] for s in range(n)])
    finite = dist[np.isfinite(dist)]
    longest = float(finite.max()) if finite.size else 0.0

    commodities = []
    for idx, demand in zip(chosen, demands):
        s, t = pairs[int(idx)]
        ticket = config.base_price
        if longest > 0:
            ticket += config.price_slope * float(dist[s, t]) / longest
        commodities.append(Commodity(s, t, float(demand), ticket))
    return commodities


def generate_instance(config):
    """
    Network, commodities and budget drawn from one seeded random source

    :param GeneratorConfig: The configuration
    :return Instance: The instance
    """
    rng = np.random.default_rng(config.seed)
    net = generate_planar(config, rng)
    commodities = generate_commodities(net, config, rng)
    return Instance(net, commodities, config.fine, config.budget)


def budget_sweep(instance, budgets=None):
    """
    Copies of the instance with other budgets

    :param Instance: The instance
    :param iterable/None: The budgets, 20 values from 0.2 to 25 if None
    :return list: One instance per budget
    """
    budgets = DEFAULT_BUDGETS if budgets is None else list(budgets)
    if not budgets:
        raise InvalidConfigError('the budget list is empty')
    if min(budgets) < 0:
        raise InvalidConfigError('budgets must be nonnegative')
    return [instance.with_budget(b) for b in budgets]


def instance_filename(config):
    """
    :param GeneratorConfig: The configuration
    :return str: File name like 'rand_n25_k25_seed3_b1.json'
    """
    return '{}_n{}_k{}_seed{}_b{:g}.json'.format(
        config.tag, config.n_nodes, config.n_commodities, config.seed,
        config.budget)


def write_suite(config, count, out_dir):
    """
    Write 'count' instances with seeds config.seed, config.seed + 1, ...
    together with a manifest

    :param GeneratorConfig: Configuration of the first instance
    :param int: Number of instances
    :param str/Path: Output directory, created if missing
    :return list: Paths of the instance files
    """
    if count < 0:
        raise InvalidConfigError('count must be nonnegative')
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths, entries, n_edges = [], [], []
    for i in range(count):
        current = dataclasses.replace(config, seed=config.seed + i)
        path = out_dir / instance_filename(current)
        instance = generate_instance(current)
        n_edges.append(instance.network.n_edges)
        path.write_text(dump_instance(instance), encoding='utf-8')
        paths.append(path)
        entries.append({'file': path.name, 'seed': current.seed,
                        'config': dataclasses.asdict(current)})
        logger.info('generated %s', path.name)
    if n_edges:
        expected = {v: size_classes.EXPECTED_EDGES[k]
                    for k, v in size_classes.NODES.items()}
        logger.info('mean number of edges %.1f (size class average %s)',
                    np.mean(n_edges), expected.get(config.n_nodes, 'n/a'))
    manifest = {'count': count, 'instances': entries}
    (out_dir / MANIFEST).write_text(json.dumps(manifest, indent=2),
                                    encoding='utf-8')
    return paths
