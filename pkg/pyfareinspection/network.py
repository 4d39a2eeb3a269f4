"""Module with the network model and shortest-path primitives"""

import copy
import heapq
import math
from dataclasses import dataclass

import networkx as nx
import numpy as np

from .errors import (InstanceValidationError, InvalidStrategyError,
                     InvalidPathError)
from .types.tolerances import TOL, BUDGET_TOL, SUPPORT_TOL, DOMINANCE_TOL


@dataclass(frozen=True)
class Edge:
    """Directed edge, the endpoints are node indices"""
    id: int
    tail: int
    head: int
    cost: float


@dataclass(frozen=True)
class Commodity:
    """Class of passengers travelling from source to target (node indices)"""
    source: int
    target: int
    demand: float
    ticket: float


@dataclass(frozen=True)
class PathLabel:
    """
    Cost and survival probability of a path

    Attributes
    ----------
    cost : float
        Sum of the edge costs
    survival : float
        Probability of traversing the path without being inspected
    path : tuple
        Edge ids of the path
    """
    cost: float
    survival: float
    path: tuple = ()

    def dominates(self, other, tol=DOMINANCE_TOL):
        """
        Check if this label is at least as good as other in both criteria

        :param PathLabel: The other label
        :param float: Absolute tolerance of the comparison
        :return bool: True if the other label is dominated
        """
        return (self.cost <= other.cost + tol and
                self.survival >= other.survival - tol)


class Network:
    """
    Directed multigraph with travel costs

    Parallel edges and self-loops are allowed, edges are identified by their
    id, which is also their position in 'edges'.

    Attributes
    ----------
    nodes : tuple
        Names of the nodes, node index is the position in the tuple
    index : dict
        Mapping from node name to node index
    edges : tuple
        Edge instances ordered by id
    costs : numpy.ndarray
        Read-only vector of the edge costs
    tails, heads : numpy.ndarray
        Read-only vectors of the edge endpoints
    out_edges : tuple
        For every node, the ids of the edges leaving it
    in_edges : tuple
        For every node, the ids of the edges entering it
    positions : dict/None
        Planar coordinates of the nodes, if known

    Methods
    -------
    from_arcs
        Build the network from (tail, head, cost) triples of node names
    node_id
        Get index of a node by its name
    to_networkx
        Get the network as networkx.MultiDiGraph with edge ids as keys
    """
    def __init__(self, nodes, edges, positions=None):
        """
        :param iterable: Names of the nodes
        :param iterable: Edge instances with ids 0, ..., m - 1
        :param dict/None: Node name -> (x, y) coordinates
        """
        self.nodes = tuple(str(x) for x in nodes)
        self.index = {name: i for i, name in enumerate(self.nodes)}
        if len(self.index) != len(self.nodes):
            raise InstanceValidationError('node names are not unique')

        edges = sorted(edges, key=lambda e: e.id)
        if [e.id for e in edges] != list(range(len(edges))):
            raise InstanceValidationError(
                'edge ids must be 0, ..., %d without gaps' % (len(edges) - 1))
        n = len(self.nodes)
        for e in edges:
            if not (0 <= e.tail < n and 0 <= e.head < n):
                raise InstanceValidationError(
                    'edge %d references unknown node' % e.id)
            if not math.isfinite(e.cost) or e.cost < 0:
                raise InstanceValidationError(
                    'edge %d has invalid cost %s' % (e.id, e.cost))
        self.edges = tuple(edges)

        self.costs = np.array([e.cost for e in self.edges], dtype=float)
        self.tails = np.array([e.tail for e in self.edges], dtype=np.int64)
        self.heads = np.array([e.head for e in self.edges], dtype=np.int64)
        for array in (self.costs, self.tails, self.heads):
            array.flags.writeable = False

        out_edges, in_edges = [[] for _ in range(n)], [[] for _ in range(n)]
        for e in self.edges:
            out_edges[e.tail].append(e.id)
            in_edges[e.head].append(e.id)
        self.out_edges = tuple(tuple(x) for x in out_edges)
        self.in_edges = tuple(tuple(x) for x in in_edges)

        self.positions = None
        if positions is not None:
            missing = set(self.nodes) - set(positions)
            if missing:
                raise InstanceValidationError(
                    'missing position of node "%s"' % sorted(missing)[0])
            self.positions = {k: (float(positions[k][0]),
                                  float(positions[k][1])) for k in self.nodes}

    @classmethod
    def from_arcs(cls, nodes, arcs, positions=None):
        """
        Build the network from (tail, head, cost) triples, ids follow the order

        :param iterable: Names of the nodes
        :param iterable: Triples (tail name, head name, cost)
        :param dict/None: Node name -> (x, y) coordinates
        :return Network: The network
        """
        nodes = [str(x) for x in nodes]
        index = {name: i for i, name in enumerate(nodes)}
        edges = []
        for i, (tail, head, cost) in enumerate(arcs):
            try:
                edges.append(Edge(i, index[str(tail)], index[str(head)],
                                  float(cost)))
            except KeyError as e:
                raise InstanceValidationError(
                    'edge %d references unknown node %s' % (i, e)) from e
        return cls(nodes, edges, positions)

    @property
    def n_nodes(self):
        """Number of nodes"""
        return len(self.nodes)

    @property
    def n_edges(self):
        """Number of edges"""
        return len(self.edges)

    def node_id(self, name):
        """
        Get index of a node by its name

        :param str/int: Name of the node (indices are passed through)
        :return int: Index of the node
        """
        if isinstance(name, (int, np.integer)) and not isinstance(name, bool):
            if 0 <= name < self.n_nodes:
                return int(name)
        elif str(name) in self.index:
            return self.index[str(name)]
        raise InstanceValidationError('unknown node "%s"' % name)

    def to_networkx(self):
        """
        Get the network as networkx.MultiDiGraph

        Nodes are the node indices, edge keys are the edge ids and every
        edge carries its 'cost'.

        :return networkx.MultiDiGraph: The graph
        """
        graph = nx.MultiDiGraph()
        graph.add_nodes_from(range(self.n_nodes))
        for e in self.edges:
            graph.add_edge(e.tail, e.head, key=e.id, cost=e.cost)
        return graph

    def __repr__(self):
        return '<Instance of {} with {} nodes and {} edges>'.format(
            self.__class__.__name__, self.n_nodes, self.n_edges)


class InspectionStrategy:
    """
    Inspection probability of every edge

    Attributes
    ----------
    probabilities : numpy.ndarray
        Probability for every edge id, each in [0, 1]

    Methods
    -------
    zeros
        Strategy without any inspection
    from_mapping
        Build the strategy from edge id -> probability mapping
    total
        Sum of the probabilities (the used budget)
    support
        Edges with positive probability
    check_budget
        Raise if the strategy uses more than the budget
    """
    def __init__(self, probabilities):
        """
        :param iterable: Probability for every edge id
        """
        p = np.array(probabilities, dtype=float).reshape(-1)
        if p.size and (not np.all(np.isfinite(p)) or p.min() < -TOL or
                       p.max() > 1 + TOL):
            raise InvalidStrategyError('probabilities must lie in [0, 1]')
        self.probabilities = np.clip(p, 0.0, 1.0)

    @classmethod
    def zeros(cls, n_edges):
        """
        :param int: Number of edges of the network
        :return InspectionStrategy: Strategy without inspections
        """
        return cls(np.zeros(n_edges))

    @classmethod
    def from_mapping(cls, mapping, n_edges):
        """
        :param dict: Edge id -> probability, omitted edges get 0
        :param int: Number of edges of the network
        :return InspectionStrategy: The strategy
        """
        p = np.zeros(n_edges)
        for edge, value in mapping.items():
            if not 0 <= int(edge) < n_edges:
                raise InvalidStrategyError('unknown edge %s' % edge)
            p[int(edge)] = value
        return cls(p)

    def total(self):
        """Sum of the probabilities"""
        return math.fsum(self.probabilities)

    def support(self, tol=SUPPORT_TOL):
        """
        :param float: Probabilities not above this value are ignored
        :return tuple: Sorted ids of edges with probability above tol
        """
        return tuple(int(e) for e in np.nonzero(self.probabilities > tol)[0])

    def check_budget(self, budget):
        """
        :param float: The budget of the leader
        """
        if self.total() > budget + BUDGET_TOL:
            raise InvalidStrategyError(
                'total probability %s exceeds the budget %s' %
                (self.total(), budget))

    def to_dict(self):
        """
        :return dict: Edge id -> probability of the positive entries
        """
        return {int(e): float(self.probabilities[e])
                for e in np.nonzero(self.probabilities > 0)[0]}

    def copy(self):
        """Independent copy of the strategy"""
        return InspectionStrategy(self.probabilities)

    def __len__(self):
        return len(self.probabilities)

    def __getitem__(self, edge):
        return float(self.probabilities[edge])

    def __repr__(self):
        return '<Instance of {} over {} edges with total {:.6g}>'.format(
            self.__class__.__name__, len(self), self.total())


class Instance:
    """
    Network, commodities, fine and budget of one fare inspection problem

    The instance is immutable once constructed. For every commodity, the
    cost of a shortest path, one shortest path and the distances of all
    nodes to its target are precomputed.

    Attributes
    ----------
    network : Network
        The transit network
    commodities : tuple
        Commodity instances
    fine : float
        The fine F, it includes the ticket
    budget : float
        Upper bound on the sum of inspection probabilities
    """
    def __init__(self, network, commodities, fine, budget):
        """
        :param Network: The transit network
        :param iterable: Commodity instances
        :param float: The fine
        :param float: The inspection budget
        """
        self.network = network
        self.commodities = tuple(commodities)
        self.fine = float(fine)
        if not math.isfinite(self.fine) or self.fine < 0:
            raise InstanceValidationError('fine must be nonnegative')
        self.budget = self._checked_budget(budget)

        n = network.n_nodes
        for i, k in enumerate(self.commodities):
            if not (0 <= k.source < n and 0 <= k.target < n):
                raise InstanceValidationError(
                    'commodity %d references unknown node' % i)
            if not math.isfinite(k.demand) or k.demand < 0:
                raise InstanceValidationError(
                    'negative demand for commodity %d' % i)
            if not math.isfinite(k.ticket) or k.ticket < 0:
                raise InstanceValidationError(
                    'negative ticket for commodity %d' % i)
            if k.ticket > self.fine + TOL:
                raise InstanceValidationError(
                    'ticket exceeds fine for commodity %d' % i)

        # Shortest paths w.r.t. the costs, one tree per distinct source
        trees = {s: dijkstra(network, network.costs, s)
                 for s in sorted({k.source for k in self.commodities})}
        sp_cost, sp_path = [], []
        for i, k in enumerate(self.commodities):
            dist, pred = trees[k.source]
            if not math.isfinite(dist[k.target]):
                raise InstanceValidationError(
                    'commodity %d: "%s" is not reachable from "%s"' %
                    (i, network.nodes[k.target], network.nodes[k.source]))
            sp_cost.append(float(dist[k.target]))
            sp_path.append(tree_path(network, pred, k.source, k.target))
        self._sp_cost = tuple(sp_cost)
        self._sp_path = tuple(sp_path)

        # Distances to every target, needed by the adaptive followers
        self._to_target = {}
        for t in sorted({k.target for k in self.commodities}):
            dist = shortest_path_distances(network, network.costs, t)
            dist.flags.writeable = False
            self._to_target[t] = dist

    @staticmethod
    def _checked_budget(budget):
        budget = float(budget)
        if not math.isfinite(budget) or budget < 0:
            raise InstanceValidationError('budget must be nonnegative')
        return budget

    @property
    def n_commodities(self):
        """Number of commodities"""
        return len(self.commodities)

    def sp_cost(self, commodity):
        """
        :param int: Index of the commodity
        :return float: Cost of a shortest source-target path
        """
        return self._sp_cost[commodity]

    def sp_path(self, commodity):
        """
        :param int: Index of the commodity
        :return tuple: Edge ids of a shortest source-target path
        """
        return self._sp_path[commodity]

    def dist_to_target(self, commodity):
        """
        :param int: Index of the commodity
        :return numpy.ndarray: Cost distance of every node to the target
        """
        return self._to_target[self.commodities[commodity].target]

    def total_demand(self):
        """Sum of the demands of all commodities"""
        return math.fsum(k.demand for k in self.commodities)

    def with_budget(self, budget):
        """
        :param float: The new budget
        :return Instance: Copy of the instance with another budget
        """
        other = copy.copy(self)
        other.budget = self._checked_budget(budget)
        return other

    def check_strategy(self, strategy):
        """
        Raise if the strategy does not fit the network or the budget

        :param InspectionStrategy: The strategy
        """
        if len(strategy) != self.network.n_edges:
            raise InvalidStrategyError(
                'strategy has %d entries, network has %d edges' %
                (len(strategy), self.network.n_edges))
        strategy.check_budget(self.budget)

    def __repr__(self):
        return ('<Instance of {} with {} nodes, {} edges, {} commodities, '
                'fine {:g}, budget {:g}>'.format(
                    self.__class__.__name__, self.network.n_nodes,
                    self.network.n_edges, self.n_commodities, self.fine,
                    self.budget))


def probabilities_of(strategy):
    """
    :param InspectionStrategy/iterable: Strategy or plain probabilities
    :return numpy.ndarray: The probabilities
    """
    if isinstance(strategy, InspectionStrategy):
        return strategy.probabilities
    return np.asarray(strategy, dtype=float)


def dijkstra(net, weights, root, reverse=False, blocked=None):
    """
    Shortest paths from the root, or to the root when reverse is True

    Ties between nodes with equal distance are settled by lowest index.

    :param Network: The network
    :param iterable: Nonnegative weight of every edge
    :param int: Index of the root node
    :param bool: Follow the edges backwards
    :param set/None: Ids of edges that cannot be used
    :return tuple: Distances and predecessor edges (-1 for none) as arrays
    """
    w = np.asarray(weights, dtype=float).tolist()
    edges = net.edges
    adjacency = net.in_edges if reverse else net.out_edges
    dist = [math.inf] * net.n_nodes
    pred = [-1] * net.n_nodes
    done = [False] * net.n_nodes
    dist[root] = 0.0
    heap = [(0.0, root)]
    while heap:
        d, v = heapq.heappop(heap)
        if done[v]:
            continue
        done[v] = True
        for e in adjacency[v]:
            if blocked is not None and e in blocked:
                continue
            u = edges[e].tail if reverse else edges[e].head
            nd = d + w[e]
            if nd < dist[u]:
                dist[u] = nd
                pred[u] = e
                heapq.heappush(heap, (nd, u))
    return np.array(dist), np.array(pred, dtype=int)


def tree_path(net, pred, source, target, reverse=False):
    """
    Unroll an edge sequence from a shortest-path tree

    :param Network: The network
    :param iterable: Predecessor edges returned by dijkstra
    :param int: Index of the first node of the path
    :param int: Index of the last node of the path
    :param bool: True if the tree was built towards the target
    :return tuple/None: Edge ids of the path, None if there is none
    """
    path = []
    if reverse:
        v = source
        while v != target:
            e = int(pred[v])
            if e < 0 or len(path) > net.n_nodes:
                return None
            path.append(e)
            v = net.edges[e].head
        return tuple(path)

    v = target
    while v != source:
        e = int(pred[v])
        if e < 0 or len(path) > net.n_nodes:
            return None
        path.append(e)
        v = net.edges[e].tail
    return tuple(reversed(path))


def shortest_path_distances(net, weights, target):
    """
    Distances of all nodes to the target

    :param Network: The network
    :param iterable: Nonnegative weight of every edge
    :param int/str: The target node (index or name)
    :return numpy.ndarray: Distance per node index, unreachable are inf
    """
    dist, _ = dijkstra(net, weights, net.node_id(target), reverse=True)
    return dist


def check_walk(net, path):
    """
    Raise unless the edges form a connected walk

    :param Network: The network
    :param iterable: Edge ids
    """
    for i, e in enumerate(path):
        if not 0 <= e < net.n_edges:
            raise InvalidPathError(path, 'unknown edge %s' % e)
        if i and net.edges[path[i - 1]].head != net.edges[e].tail:
            raise InvalidPathError(
                path, 'edge %s does not start where edge %s ends' %
                (e, path[i - 1]))


def evaluate_path(net, strategy, path):
    """
    Compute cost and survival probability of a walk

    :param Network: The network
    :param InspectionStrategy: The inspection probabilities
    :param iterable: Edge ids of the walk
    :return PathLabel: The label of the walk
    """
    path = tuple(int(e) for e in path)
    check_walk(net, path)
    probs = probabilities_of(strategy)
    cost = math.fsum(net.edges[e].cost for e in path)
    survival = math.prod(1.0 - float(probs[e]) for e in path)
    return PathLabel(cost, survival, path)
