"""Module with directed multicuts used as start strategies"""

import logging
from collections import deque

import networkx as nx
import numpy as np

from .network import InspectionStrategy, dijkstra, tree_path

logger = logging.getLogger(__name__)

# Networks with at most this many edges get a minimum cardinality cut
EXACT_LIMIT = 25


def _separable(instance):
    """Commodities whose source and target differ"""
    return [k for k in instance.commodities if k.source != k.target]


def is_multicut(instance, cut):
    """
    Check that no commodity target is reachable after deleting the cut

    Commodities whose source is their target are never separated, they
    are left out.

    :param Instance: The instance
    :param iterable: Edge ids of the cut
    :return bool: True if every commodity is separated
    """
    net, cut = instance.network, set(cut)
    graph = nx.DiGraph()
    graph.add_nodes_from(range(net.n_nodes))
    graph.add_edges_from((e.tail, e.head) for e in net.edges
                         if e.id not in cut)
    return not any(nx.has_path(graph, k.source, k.target)
                   for k in _separable(instance))


def _uncut_path(net, commodities, cut):
    """Path with fewest edges of the first commodity the cut misses"""
    for k in commodities:
        pred = {k.source: -1}
        queue = deque([k.source])
        while queue and k.target not in pred:
            v = queue.popleft()
            for e in net.out_edges[v]:
                w = net.edges[e].head
                if e in cut or w in pred:
                    continue
                pred[w] = e
                queue.append(w)
        if k.target in pred:
            path, v = [], k.target
            while v != k.source:
                path.append(pred[v])
                v = net.edges[pred[v]].tail
            return path[::-1]
    return None


def _search(net, commodities, cut, forbidden, depth):
    path = _uncut_path(net, commodities, cut)
    if path is None:
        return cut
    if depth == 0:
        return None
    # Branch on the edges of the path, earlier choices are excluded later
    excluded = set(forbidden)
    for e in path:
        if e in excluded:
            continue
        found = _search(net, commodities, cut | {e}, excluded, depth - 1)
        if found is not None:
            return found
        excluded.add(e)
    return None


def _exact_multicut(instance, upper):
    net = instance.network
    for depth in range(len(upper)):
        found = _search(net, _separable(instance), frozenset(), frozenset(),
                        depth)
        if found is not None:
            return found
    return set(upper)


def _greedy_multicut(instance):
    """
    Add the edge shared by most shortest paths of uncut commodities, then
    drop edges that are not needed
    """
    net = instance.network
    cut = []
    while True:
        counts = np.zeros(net.n_edges, dtype=np.int64)
        blocked = set(cut)
        trees = {}
        for k in _separable(instance):
            if k.source not in trees:
                trees[k.source] = dijkstra(net, net.costs, k.source,
                                           blocked=blocked)[1]
            path = tree_path(net, trees[k.source], k.source, k.target)
            if path:
                counts[list(path)] += 1
        if not counts.any():
            break
        # argmax gives the lowest id among ties
        cut.append(int(np.argmax(counts)))

    for e in reversed(list(cut)):
        rest = [x for x in cut if x != e]
        if is_multicut(instance, rest):
            cut = rest
    return set(cut)


def find_multicut(instance, exact_limit=EXACT_LIMIT):
    """
    Directed multicut that separates every commodity

    Networks with at most 'exact_limit' edges are solved to minimum
    cardinality by iterative deepening, larger ones greedily.

    :param Instance: The instance
    :param int: Largest number of edges for the exact search
    :return tuple: Sorted edge ids of the cut
    """
    cut = _greedy_multicut(instance)
    if instance.network.n_edges <= exact_limit:
        cut = _exact_multicut(instance, cut)
    logger.info('multicut with %d edges', len(cut))
    return tuple(sorted(cut))


def multicut_start(instance, cut=None):
    """
    Spread the budget uniformly over a multicut

    :param Instance: The instance
    :param iterable/None: Edge ids of the cut, computed if None
    :return InspectionStrategy: p_e = min(1, B / |M|) on the cut
    """
    if cut is None:
        cut = find_multicut(instance)
    p = np.zeros(instance.network.n_edges)
    if cut:
        p[list(cut)] = min(1.0, instance.budget / len(cut))
    return InspectionStrategy(p)
