"""Module with the best-response solvers of the passengers"""

import heapq
import itertools
import logging
import math
from dataclasses import dataclass

import networkx as nx
import numpy as np

from .data import FollowerResult
from .errors import InvalidEpsilonError, OracleLimitError
from .network import (PathLabel, check_walk, evaluate_path, probabilities_of,
                      shortest_path_distances, tree_path)
from .types.tolerances import DOMINANCE_TOL, WINDOW_TOL
from .types.variants import NON_ADAPTIVE, ADAPTIVE, parse_followers

logger = logging.getLogger(__name__)

# Guard of the brute-force enumeration
ORACLE_MAX_NODES = 14
ORACLE_MAX_PATHS = 500000


@dataclass(frozen=True)
class AdaptiveLabels:
    """
    Result of the backward label-setting for adaptive followers

    Attributes
    ----------
    phi : numpy.ndarray
        Optimal expected cost from every node, inf if the target is unreachable
    next_edge : numpy.ndarray
        First edge of an optimal path from every node, -1 if none
    settled : frozenset
        Nodes whose label is final
    """
    phi: np.ndarray
    next_edge: np.ndarray
    settled: frozenset


def f_nonadaptive(net, strategy, fine, path):
    """
    Expected cost of a passenger who follows the path whatever happens

    :param Network: The network
    :param InspectionStrategy: The inspection probabilities
    :param float: The fine
    :param iterable: Edge ids of the path
    :return float: c(P) + (1 - pi(P)) * F
    """
    label = evaluate_path(net, strategy, path)
    return label.cost + (1.0 - label.survival) * fine


def f_adaptive(net, strategy, fine, path, target, dist=None):
    """
    Expected cost of a passenger who switches to a shortest path once fined

    :param Network: The network
    :param InspectionStrategy: The inspection probabilities
    :param float: The fine
    :param iterable: Edge ids of the path
    :param int/str: The target of the passenger
    :param numpy.ndarray/None: Cost distances to the target, if known
    :return float: The adaptive expected cost
    """
    path = tuple(int(e) for e in path)
    check_walk(net, path)
    if dist is None:
        dist = shortest_path_distances(net, net.costs, target)
    probs = probabilities_of(strategy)

    total, survival = 0.0, 1.0
    for e in path:
        # Nothing is paid after a certain inspection
        if survival == 0.0:
            break
        p = float(probs[e])
        term = net.edges[e].cost
        if p > 0:
            term += p * (fine + dist[net.edges[e].head])
        total += survival * term
        survival *= 1.0 - p
    return total


def _nonadaptive_value(label, fine):
    return label.cost + (1.0 - label.survival) * fine


class _Label:
    """Label of the Pareto enumeration, linked to its parent"""
    __slots__ = ('cost', 'survival', 'node', 'edge', 'parent', 'alive')

    def __init__(self, cost, survival, node, edge, parent):
        self.cost = cost
        self.survival = survival
        self.node = node
        self.edge = edge
        self.parent = parent
        self.alive = True

    def path(self):
        """Edge ids from the source to this label"""
        edges, label = [], self
        while label.edge >= 0:
            edges.append(label.edge)
            label = label.parent
        return tuple(reversed(edges))


def _dominated(bag, cost, survival):
    return any(x.cost <= cost + DOMINANCE_TOL and
               x.survival >= survival - DOMINANCE_TOL for x in bag)


def pareto_frontier(net, strategy, source, target, bound=math.inf,
                    to_target=None):
    """
    Enumerate the nondominated (cost, survival) labels of source-target paths

    Labels are settled in lexicographic order of (cost, -survival), so a
    settled label is never dominated by a later one. Labels dominated by a
    label at the target are pruned, since extending a path can only raise
    its cost and lower its survival probability. With a finite bound,
    labels whose cost plus the remaining distance exceeds it are dropped.

    :param Network: The network
    :param InspectionStrategy: The inspection probabilities
    :param int: Index of the source
    :param int: Index of the target
    :param float: Largest cost of a path that is kept
    :param numpy.ndarray/None: Cost distances to the target, zeros if None
    :return list: PathLabel instances sorted by cost
    """
    costs = net.costs.tolist()
    rest = [0.0] * net.n_nodes if to_target is None else \
        np.asarray(to_target, dtype=float).tolist()
    keep = (1.0 - probabilities_of(strategy)).tolist()
    bags = [[] for _ in range(net.n_nodes)]
    start = _Label(0.0, 1.0, source, -1, None)
    bags[source].append(start)
    counter = itertools.count()
    heap = [(0.0, -1.0, next(counter), start)]

    while heap:
        label = heapq.heappop(heap)[3]
        if not label.alive or label.node == target:
            continue
        for e in net.out_edges[label.node]:
            w = net.edges[e].head
            if w == source:
                continue
            cost = label.cost + costs[e]
            if cost + rest[w] > bound:
                continue
            survival = label.survival * keep[e]
            if _dominated(bags[w], cost, survival):
                continue
            if w != target and _dominated(bags[target], cost, survival):
                continue
            # Drop the labels the new one dominates
            for old in bags[w]:
                if cost <= old.cost + DOMINANCE_TOL and \
                        survival >= old.survival - DOMINANCE_TOL:
                    old.alive = False
            bags[w] = [x for x in bags[w] if x.alive]
            new = _Label(cost, survival, w, e, label)
            bags[w].append(new)
            heapq.heappush(heap, (cost, -survival, next(counter), new))

    labels = sorted(bags[target], key=lambda x: (x.cost, -x.survival))
    return [PathLabel(x.cost, x.survival, x.path()) for x in labels]


def solve_nonadaptive_exact(instance, strategy, commodity):
    """
    Exact best response of non-adaptive followers by Pareto enumeration

    The worst case running time is exponential, the method is meant for
    networks of moderate size. Paths that cost more than the expected cost
    of the shortest path are never better, they are left out.

    :param Instance: The instance
    :param InspectionStrategy: The inspection probabilities
    :param int: Index of the commodity
    :return FollowerResult: The best path, 'frontier' holds the labels
        within the bound
    """
    net, fine = instance.network, instance.fine
    k = instance.commodities[commodity]
    bound = f_nonadaptive(net, strategy, fine, instance.sp_path(commodity))
    frontier = pareto_frontier(net, strategy, k.source, k.target,
                               bound + WINDOW_TOL,
                               instance.dist_to_target(commodity))
    best = min(frontier, key=lambda x: (_nonadaptive_value(x, fine), x.path))
    label = evaluate_path(net, strategy, best.path)
    return FollowerResult(label.path, _nonadaptive_value(label, fine), label,
                          NON_ADAPTIVE, frontier=frontier)


def _relax(row, pred_edge, pred_level, cand, heads, ids, levels):
    """
    Apply the best strictly improving candidate of every head node

    :return bool: True if any node improved
    """
    if cand.size == 0:
        return False
    best = np.full(row.shape, np.inf)
    np.minimum.at(best, heads, cand)
    improved = best < row
    if not improved.any():
        return False
    idx = np.nonzero(improved[heads] & (cand == best[heads]))[0]
    _, first = np.unique(heads[idx], return_index=True)
    idx = idx[first]
    h = heads[idx]
    row[h] = cand[idx]
    pred_edge[h] = ids[idx]
    pred_level[h] = levels[idx]
    return True


def _unroll(net, pred_edge, pred_level, source, target, level):
    """Edge ids of the path stored in the scaled table, None if broken"""
    path, v, b = [], target, level
    for _ in range(pred_edge.size + 1):
        e = int(pred_edge[b, v])
        if e < 0:
            if pred_level[b, v] < 0:
                return tuple(reversed(path)) if v == source else None
            b = int(pred_level[b, v])
            continue
        path.append(e)
        b = int(pred_level[b, v])
        v = net.edges[e].tail
    return None


def _restricted_paths(net, weights, usable, source, target, threshold,
                      eps_prime):
    """
    Paths of high survival probability among those of bounded cost

    Costs are scaled by eps' * C / n and rounded up, so every path of cost
    at most C has scaled cost at most n / eps' + n, and every path within
    that scaled cost costs at most (1 + eps') * C. Entry [b, v] of the
    table is the least weight -ln(pi) of a walk to v of scaled cost <= b.

    :return list: Candidate paths (zero-cost optimum and capped optimum)
    """
    hops = max(1, net.n_nodes - 1)
    scale = eps_prime * threshold / hops
    levels = int(math.floor(hops / eps_prime)) + hops
    scaled = np.ceil(net.costs[usable] / scale).astype(np.int64)
    fits = scaled <= levels
    ids, scaled = usable[fits], scaled[fits]
    tails, heads, w = net.tails[ids], net.heads[ids], weights[ids]

    zero = scaled == 0
    z_ids, z_tails, z_heads, z_w = ids[zero], tails[zero], heads[zero], w[zero]
    p_ids, p_tails, p_heads, p_w, p_scaled = (
        ids[~zero], tails[~zero], heads[~zero], w[~zero], scaled[~zero])

    n = net.n_nodes
    dist = np.full((levels + 1, n), np.inf)
    pred_edge = np.full((levels + 1, n), -1, dtype=np.int64)
    pred_level = np.full((levels + 1, n), -1, dtype=np.int64)
    dist[0, source] = 0.0

    for b in range(levels + 1):
        if b:
            dist[b] = dist[b - 1]
            pred_level[b] = b - 1
            mask = p_scaled <= b
            if mask.any():
                src = b - p_scaled[mask]
                cand = dist[src, p_tails[mask]] + p_w[mask]
                _relax(dist[b], pred_edge[b], pred_level[b], cand,
                       p_heads[mask], p_ids[mask], src)
        # Zero-cost edges keep the level, Bellman-Ford passes until stable
        if z_ids.size:
            same = np.full(z_ids.size, b, dtype=np.int64)
            for _ in range(n):
                cand = dist[b, z_tails] + z_w
                if not _relax(dist[b], pred_edge[b], pred_level[b], cand,
                              z_heads, z_ids, same):
                    break

    paths = []
    for level in (0, levels):
        if math.isfinite(dist[level, target]):
            path = _unroll(net, pred_edge, pred_level, source, target, level)
            if path is not None:
                paths.append(path)
    return paths


def solve_nonadaptive_fptas(instance, strategy, commodity, epsilon):
    """
    (1 + epsilon)-approximate best response of non-adaptive followers

    For cost thresholds C growing by the factor (1 + eps') with
    (1 + eps')^2 = 1 + epsilon, a path of cost at most (1 + eps') C and
    survival probability at least that of every path of cost at most C is
    computed. The best of these paths and of a plain shortest path (which
    covers paths through certainly inspected edges) is returned.

    :param Instance: The instance
    :param InspectionStrategy: The inspection probabilities
    :param int: Index of the commodity
    :param float: The approximation parameter, must be positive
    :return FollowerResult: The approximate best path
    """
    if not epsilon > 0:
        raise InvalidEpsilonError(epsilon)
    net, fine = instance.network, instance.fine
    k = instance.commodities[commodity]
    probs = probabilities_of(strategy)
    eps_prime = math.sqrt(1.0 + epsilon) - 1.0

    best = evaluate_path(net, probs, instance.sp_path(commodity))
    best_value = _nonadaptive_value(best, fine)

    finite = probs < 1.0
    weights = np.full(net.n_edges, np.inf)
    weights[finite] = -np.log1p(-probs[finite])
    usable = np.nonzero(finite)[0]
    positive = usable[net.costs[usable] > 0]

    # Thresholds start at a lower bound on the cost of a nonzero-cost path
    # and stop above both the best value found and the longest simple path
    lower = instance.sp_cost(commodity)
    if lower <= 0:
        lower = float(net.costs[positive].min()) if positive.size else 1.0
    cap = max(1, net.n_nodes - 1) * float(net.costs[usable].max()) \
        if usable.size else 0.0

    threshold, rounds = lower, 0
    while True:
        for path in _restricted_paths(net, weights, usable, k.source,
                                      k.target, threshold, eps_prime):
            label = evaluate_path(net, probs, path)
            value = _nonadaptive_value(label, fine)
            if (value, label.path) < (best_value, best.path):
                best, best_value = label, value
        rounds += 1
        if threshold >= min(best_value, cap):
            break
        threshold *= 1.0 + eps_prime

    logger.debug('fptas commodity %d: %d thresholds, value %.6g',
                 commodity, rounds, best_value)
    return FollowerResult(best.path, best_value, best, NON_ADAPTIVE)


def solve_adaptive(instance, strategy, commodity):
    """
    Exact best response of adaptive followers

    Backward label-setting from the target: the unsettled node with least
    label is settled and every edge (v, w) entering the settled node w
    offers v the value c_e + p_e (SP(w) + F) + (1 - p_e) phi(w). Ties are
    settled by lowest node index.

    :param Instance: The instance
    :param InspectionStrategy: The inspection probabilities
    :param int: Index of the commodity
    :return FollowerResult: The best path, 'labels' holds all node labels
    """
    net, fine = instance.network, instance.fine
    k = instance.commodities[commodity]
    probs = probabilities_of(strategy)
    p_list, costs = probs.tolist(), net.costs.tolist()
    sp = instance.dist_to_target(commodity)

    phi = [math.inf] * net.n_nodes
    next_edge = [-1] * net.n_nodes
    settled = [False] * net.n_nodes
    phi[k.target] = 0.0
    heap = [(0.0, k.target)]
    while heap:
        value, w = heapq.heappop(heap)
        if settled[w]:
            continue
        settled[w] = True
        for e in net.in_edges[w]:
            v = net.edges[e].tail
            if settled[v]:
                continue
            p = p_list[e]
            cand = costs[e] + (1.0 - p) * value
            if p > 0:
                cand += p * (sp[w] + fine)
            if cand < phi[v]:
                phi[v] = cand
                next_edge[v] = e
                heapq.heappush(heap, (cand, v))

    path = tree_path(net, next_edge, k.source, k.target, reverse=True)
    label = evaluate_path(net, probs, path)
    labels = AdaptiveLabels(np.array(phi), np.array(next_edge),
                            frozenset(i for i, x in enumerate(settled) if x))
    value = f_adaptive(net, probs, fine, path, k.target, dist=sp)
    return FollowerResult(path, value, label, ADAPTIVE, labels=labels)


def brute_force_oracle(instance, strategy, commodity, variant,
                       limit=ORACLE_MAX_PATHS):
    """
    Best response by enumerating all simple source-target paths

    Networks with more than 14 nodes are only enumerated up to 'limit'
    paths.

    :param Instance: The instance
    :param InspectionStrategy: The inspection probabilities
    :param int: Index of the commodity
    :param str: 'n' for non-adaptive, 'a' for adaptive followers
    :param int: Maximal number of paths for larger networks
    :return FollowerResult: The best simple path
    """
    followers = parse_followers(variant)
    net, fine = instance.network, instance.fine
    k = instance.commodities[commodity]
    probs = probabilities_of(strategy)
    sp = instance.dist_to_target(commodity)

    if k.source == k.target:
        label = evaluate_path(net, probs, ())
        return FollowerResult((), 0.0, label, followers)

    best = None
    graph = net.to_networkx()
    for count, edges in enumerate(
            nx.all_simple_edge_paths(graph, k.source, k.target), 1):
        if count > limit and net.n_nodes > ORACLE_MAX_NODES:
            raise OracleLimitError(net.n_nodes, limit)
        path = tuple(key for _, _, key in edges)
        if followers == NON_ADAPTIVE:
            value = f_nonadaptive(net, probs, fine, path)
        else:
            value = f_adaptive(net, probs, fine, path, k.target, dist=sp)
        if best is None or (value, path) < best:
            best = (value, path)

    label = evaluate_path(net, probs, best[1])
    return FollowerResult(best[1], best[0], label, followers)
