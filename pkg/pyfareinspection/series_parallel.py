"""Module with the series-parallel decomposition and its path recursion"""

import logging
import math
from dataclasses import dataclass

import networkx as nx

from .data import FollowerResult
from .errors import NotSeriesParallelError
from .network import PathLabel, evaluate_path, probabilities_of
from .types.tolerances import TOL
from .types.variants import NON_ADAPTIVE

logger = logging.getLogger(__name__)

EDGE = 'edge'
SERIES = 'series'
PARALLEL = 'parallel'


@dataclass(frozen=True)
class SPTree:
    """
    Binary decomposition tree of a two-terminal series-parallel graph

    Leaves are edges, inner nodes compose their children in series (left
    first) or in parallel (ordered by smallest edge id).

    Attributes
    ----------
    kind : str
        'edge', 'series' or 'parallel'
    edge : int
        Edge id of a leaf, -1 for inner nodes
    left, right : SPTree/None
        Children of inner nodes
    """
    kind: str
    edge: int = -1
    left: 'SPTree' = None
    right: 'SPTree' = None

    @classmethod
    def leaf(cls, edge):
        """Tree of a single edge"""
        return cls(EDGE, edge)

    @classmethod
    def series(cls, left, right):
        """Series composition, left is closer to the source"""
        return cls(SERIES, -1, left, right)

    @classmethod
    def parallel(cls, a, b):
        """Parallel composition with children ordered by smallest edge id"""
        if b.min_edge < a.min_edge:
            a, b = b, a
        return cls(PARALLEL, -1, a, b)

    @property
    def min_edge(self):
        """Smallest edge id of the subtree"""
        if self.kind == EDGE:
            return self.edge
        return min(self.left.min_edge, self.right.min_edge)

    def edges(self):
        """
        :return tuple: Edge ids of the leaves, left to right
        """
        if self.kind == EDGE:
            return (self.edge,)
        return self.left.edges() + self.right.edges()

    def __repr__(self):
        if self.kind == EDGE:
            return 'e%d' % self.edge
        return '%s(%r, %r)' % (self.kind, self.left, self.right)


@dataclass(frozen=True)
class IntervalLabeledPath:
    """
    Candidate path of the recursion with the range of survival
    probabilities of complete paths in which it can be optimal

    Attributes
    ----------
    label : PathLabel
        Cost, survival probability and edges of the partial path
    lower, upper : float
        Bounds of the range within [0, 1]
    """
    label: PathLabel
    lower: float = 0.0
    upper: float = 1.0


def commodity_subgraph(net, source, target):
    """
    Edges that can lie on a simple source-target path

    Self-loops, edges into the source and edges out of the target are
    dropped, the rest must be reachable from the source and reach the target.

    :param Network: The network
    :param int: Index of the source
    :param int: Index of the target
    :return list: Sorted edge ids
    """
    candidates = [e for e in net.edges if e.tail != e.head and
                  e.head != source and e.tail != target]
    graph = nx.DiGraph()
    graph.add_nodes_from(range(net.n_nodes))
    graph.add_edges_from((e.tail, e.head) for e in candidates)
    forward = nx.descendants(graph, source) | {source}
    backward = nx.ancestors(graph, target) | {target}
    return [e.id for e in candidates
            if e.tail in forward and e.head in backward]


def sp_decompose(net, source, target):
    """
    Decompose the source-target subgraph by series and parallel reductions

    Parallel super-edges are merged, then nodes with exactly one entering
    and one leaving super-edge are bypassed, until nothing changes. The
    graph is series-parallel iff a single source-target super-edge remains.

    :param Network: The network
    :param int/str: The source node
    :param int/str: The target node
    :return SPTree: The decomposition tree
    """
    s, t = net.node_id(source), net.node_id(target)
    # key -> [tail, head, tree]
    current = {}
    for e in commodity_subgraph(net, s, t):
        current[e] = [net.edges[e].tail, net.edges[e].head,
                      SPTree.leaf(e)]

    changed = True
    while changed:
        changed = False
        # Parallel reductions
        groups = {}
        for key in sorted(current):
            tail, head, _ = current[key]
            groups.setdefault((tail, head), []).append(key)
        for keys in groups.values():
            if len(keys) > 1:
                tree = current[keys[0]][2]
                for key in keys[1:]:
                    tree = SPTree.parallel(tree, current.pop(key)[2])
                current[keys[0]][2] = tree
                changed = True

        # Series reductions
        entering, leaving = {}, {}
        for key, (tail, head, _) in current.items():
            leaving.setdefault(tail, []).append(key)
            entering.setdefault(head, []).append(key)
        for v in sorted(set(entering) & set(leaving) - {s, t}):
            if len(entering[v]) != 1 or len(leaving[v]) != 1:
                continue
            a, b = entering[v][0], leaving[v][0]
            if a not in current or b not in current or a == b:
                continue
            if current[a][0] == current[b][1]:
                # Bypassing v would close a cycle
                continue
            current[a] = [current[a][0], current[b][1],
                          SPTree.series(current[a][2], current[b][2])]
            del current[b]
            changed = True
            break

    if len(current) == 1:
        tail, head, tree = next(iter(current.values()))
        if (tail, head) == (s, t):
            logger.debug('decomposed %s with %d edges', tree,
                         len(tree.edges()))
            return tree
    raise NotSeriesParallelError(net.nodes[s], net.nodes[t],
                                 [x[2].min_edge for x in current.values()])


def _ratio_bound(label, other, fine):
    """
    Survival probability of the complete path at which both partial paths
    give equal expected cost
    """
    scaled = (label.cost - other.cost) / \
        (label.survival - other.survival) * label.survival
    if fine == 0:
        return math.inf if scaled > 0 else 0.0
    return scaled / fine


def _dominated(item, other):
    a, b = item.label, other.label
    if a.cost == b.cost and a.survival == b.survival:
        return b.path < a.path
    return b.cost <= a.cost and b.survival >= a.survival


def _series(first, second):
    result = []
    for a in first:
        for b in second:
            lower, upper = max(a.lower, b.lower), min(a.upper, b.upper)
            if lower > upper + TOL:
                continue
            label = PathLabel(a.label.cost + b.label.cost,
                              a.label.survival * b.label.survival,
                              a.label.path + b.label.path)
            result.append(IntervalLabeledPath(label, lower,
                                              max(lower, upper)))
    return result


def _parallel(first, second, fine):
    merged = first + second
    kept = [x for x in merged
            if not any(y is not x and _dominated(x, y) for y in merged)]

    result = []
    for item in kept:
        lower, upper = item.lower, item.upper
        a = item.label
        for other in kept:
            if other is item:
                continue
            b = other.label
            if a.cost <= b.cost and a.survival < b.survival:
                # Cheaper but riskier, only good while survival is low
                upper = min(upper, _ratio_bound(a, b, fine))
            elif a.cost > b.cost and a.survival > b.survival:
                if fine == 0:
                    lower = math.inf
                else:
                    lower = max(lower, _ratio_bound(a, b, fine))
        if lower <= upper + TOL:
            result.append(IntervalLabeledPath(a, lower, max(lower, upper)))
    return result


def find_paths(tree, net, strategy, fine):
    """
    Candidate paths of a decomposition tree with their survival intervals

    Every non-adaptive optimum of the composed graph is among the
    candidates of the root, and no more candidates than edges are kept.

    :param SPTree: The decomposition tree
    :param Network: The network
    :param InspectionStrategy: The inspection probabilities
    :param float: The fine
    :return list: IntervalLabeledPath instances
    """
    probs = probabilities_of(strategy)
    if tree.kind == EDGE:
        e = tree.edge
        label = PathLabel(net.edges[e].cost, 1.0 - float(probs[e]), (e,))
        return [IntervalLabeledPath(label)]
    left = find_paths(tree.left, net, probs, fine)
    right = find_paths(tree.right, net, probs, fine)
    if tree.kind == SERIES:
        return _series(left, right)
    return _parallel(left, right, fine)


def solve_nonadaptive_sp(instance, strategy, commodity):
    """
    Exact best response of non-adaptive followers on series-parallel graphs

    :param Instance: The instance
    :param InspectionStrategy: The inspection probabilities
    :param int: Index of the commodity
    :return FollowerResult: The best path
    """
    net, fine = instance.network, instance.fine
    k = instance.commodities[commodity]
    if k.source == k.target:
        label = evaluate_path(net, strategy, ())
        return FollowerResult((), 0.0, label, NON_ADAPTIVE)
    tree = sp_decompose(net, k.source, k.target)
    candidates = find_paths(tree, net, strategy, fine)
    best = min((x.label for x in candidates),
               key=lambda x: (x.cost + (1.0 - x.survival) * fine, x.path))
    label = evaluate_path(net, strategy, best.path)
    return FollowerResult(label.path,
                          label.cost + (1.0 - label.survival) * fine,
                          label, NON_ADAPTIVE)
