"""Module with the linear relaxation of the leader's problem and its rounding"""

import logging
import math

import numpy as np
from scipy import optimize, sparse

from .data import LeaderSolution, RelaxationSolution
from .errors import (InvalidConfigError, RelaxationError,
                     RelaxationNotConvergedError)
from .leader import evaluate_profit
from .network import InspectionStrategy, dijkstra, tree_path
from .types import algorithms, starts
from .types.variants import FIXED, FLEXIBLE, parse, parse_fares

logger = logging.getLogger(__name__)

# Stop rule of the supergradient ascent
STALL_WINDOW = 200
STALL_TOL = 1e-7


def project_capped_simplex(x, budget):
    """
    Euclidean projection onto {p in [0, 1]^m : sum(p) <= budget}

    The projection is clip(x - tau, 0, 1) with the least tau >= 0 that
    satisfies the budget, tau is found by Brent's method.

    :param numpy.ndarray: The point to project
    :param float: The budget
    :return numpy.ndarray: The projected point
    """
    x = np.asarray(x, dtype=float)
    p = np.clip(x, 0.0, 1.0)
    if budget <= 0:
        return np.zeros_like(p)
    if p.sum() <= budget:
        return p

    def excess(tau):
        return np.clip(x - tau, 0.0, 1.0).sum() - budget

    tau = optimize.brentq(excess, 0.0, float(x.max()), xtol=1e-14)
    p = np.clip(x - tau, 0.0, 1.0)
    # Brent stops within xtol, fix the last digits
    total = p.sum()
    if total > budget:
        p *= budget / total
    return p


def _shortest_paths(instance, weights):
    """Distances and predecessor trees from every distinct source"""
    net = instance.network
    return {s: dijkstra(net, weights, s)
            for s in sorted({k.source for k in instance.commodities})}


def revenue_caps(instance, fares=FLEXIBLE):
    """
    Largest revenue per passenger of every commodity

    Flexible fares earn at most the fine. Fixed fares earn at most the
    ticket as well, since a passenger evades only if the expected fine does
    not exceed the ticket.

    :param Instance: The instance
    :param str/VariantId: 'fix', 'flex' or a model variant
    :return numpy.ndarray: One cap per commodity
    """
    caps = np.full(instance.n_commodities, instance.fine)
    if parse_fares(fares) == FIXED:
        tickets = np.array([k.ticket for k in instance.commodities],
                           dtype=float)
        caps = np.minimum(caps, tickets)
    return caps


def _evaluate(instance, p, caps):
    """
    Objective, lambdas and potentials of the relaxation at p

    :return tuple: (objective, lambdas, potentials, trees)
    """
    net, fine = instance.network, instance.fine
    trees = _shortest_paths(instance, net.costs + fine * p)
    potentials = np.zeros((instance.n_commodities, net.n_nodes))
    lambdas = np.zeros(instance.n_commodities)
    for i, k in enumerate(instance.commodities):
        dist = trees[k.source][0]
        potentials[i] = np.minimum(dist, instance.sp_cost(i) + caps[i])
        lambdas[i] = min(max(dist[k.target] - instance.sp_cost(i), 0.0),
                         caps[i])
    objective = math.fsum(k.demand * x
                          for k, x in zip(instance.commodities, lambdas))
    return objective, lambdas, potentials, trees


def _solution(instance, p, method, fares, bound=None, iterations=0):
    caps = revenue_caps(instance, fares)
    objective, lambdas, potentials, _ = _evaluate(instance, p, caps)
    bound = objective if bound is None else max(bound, objective)
    return RelaxationSolution(InspectionStrategy(p), potentials, objective,
                              lambdas, bound, method, iterations, fares)


def _separable(instance):
    """Commodities with positive demand and distinct endpoints"""
    return [i for i, k in enumerate(instance.commodities)
            if k.demand > 0 and k.source != k.target]


def _solve_lp(instance, fares):
    """
    Solve the relaxation as linear program with the HiGHS backend

    Variables are the probabilities followed by one potential per node for
    every commodity with positive demand.
    """
    net, fine = instance.network, instance.fine
    caps = revenue_caps(instance, fares)
    m, n = net.n_edges, net.n_nodes
    active = _separable(instance)
    loops = net.tails == net.heads
    edge_ids = np.nonzero(~loops)[0]
    tails, heads = net.tails[edge_ids], net.heads[edge_ids]
    n_vars = m + n * len(active)

    rows, cols, vals, rhs = [], [], [], []
    # Budget
    rows.append(np.zeros(m, dtype=np.int64))
    cols.append(np.arange(m))
    vals.append(np.ones(m))
    rhs.append(np.array([instance.budget]))
    row = 1
    objective = np.zeros(n_vars)
    bounds = [(0.0, 1.0)] * m

    for j, i in enumerate(active):
        k = instance.commodities[i]
        offset = m + j * n
        count = edge_ids.size
        r = row + np.arange(count)
        # y(head) - y(tail) - F p_e <= c_e
        rows.extend([r, r, r])
        cols.extend([offset + heads, offset + tails, edge_ids])
        vals.extend([np.ones(count), -np.ones(count),
                     np.full(count, -fine)])
        rhs.append(net.costs[edge_ids])
        row += count
        # y(t) - y(s) <= SP + cap
        rows.append(np.array([row, row]))
        cols.append(np.array([offset + k.target, offset + k.source]))
        vals.append(np.array([1.0, -1.0]))
        rhs.append(np.array([instance.sp_cost(i) + caps[i]]))
        row += 1

        objective[offset + k.target] -= k.demand
        objective[offset + k.source] += k.demand
        node_bounds = [(None, None)] * n
        node_bounds[k.source] = (0.0, 0.0)
        bounds.extend(node_bounds)

    a_ub = sparse.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(row, n_vars)).tocsr()
    res = optimize.linprog(objective, A_ub=a_ub, b_ub=np.concatenate(rhs),
                           bounds=bounds, method='highs')
    if res.status != 0:
        raise RelaxationError(res.status, res.message)

    value = -res.fun - math.fsum(instance.commodities[i].demand *
                                 instance.sp_cost(i) for i in active)
    p = np.clip(res.x[:m], 0.0, 1.0)
    if p.sum() > instance.budget:
        p *= instance.budget / p.sum()
    logger.info('LP relaxation (%s fares): %d variables, %d constraints, '
                'value %.6g', fares, n_vars, row, value)
    return _solution(instance, p, algorithms.HIGHS, fares, bound=value)


def _supergradient(instance, p, trees, lambdas, caps):
    """Supergradient of the relaxed objective at p"""
    net, fine = instance.network, instance.fine
    g = np.zeros(net.n_edges)
    for i in _separable(instance):
        k = instance.commodities[i]
        # The cap is active, the constant piece is a valid supergradient
        if lambdas[i] >= caps[i]:
            continue
        path = tree_path(net, trees[k.source][1], k.source, k.target)
        g[list(path)] += fine * k.demand
    return g


def _linear_max(g, budget):
    """Maximum of <g, q> over {q in [0, 1]^m : sum(q) <= budget}"""
    values = np.sort(g[g > 0])[::-1]
    whole = int(min(math.floor(budget), values.size))
    total = values[:whole].sum()
    if whole < values.size:
        total += (budget - whole) * values[whole]
    return float(total)


def _solve_supergradient(instance, fares, eta0=0.5, max_iterations=20000):
    """
    Projected supergradient ascent on the concave form of the relaxation

    The certificate is the linearization bound g(p) + max_q <G, q - p>,
    whose minimum over the iterates bounds the optimum from above.
    """
    budget = instance.budget
    caps = revenue_caps(instance, fares)
    p = project_capped_simplex(
        np.full(instance.network.n_edges, budget), budget)
    best_p, best_value, bound = p, -math.inf, math.inf
    history = []

    for it in range(max_iterations):
        value, lambdas, _, trees = _evaluate(instance, p, caps)
        g = _supergradient(instance, p, trees, lambdas, caps)
        bound = min(bound, value + _linear_max(g, budget) - float(g @ p))
        if value > best_value:
            best_p, best_value = p, value
        history.append(best_value)

        scale = max(1.0, abs(best_value))
        if bound - best_value <= 1e-9 * scale:
            break
        if len(history) > STALL_WINDOW and \
                history[-1] - history[-1 - STALL_WINDOW] < STALL_TOL * scale:
            break
        norm = np.linalg.norm(g)
        if norm == 0:
            break
        p = project_capped_simplex(p + eta0 / math.sqrt(it + 1) * g / norm,
                                   budget)
        if it % 500 == 0:
            logger.debug('supergradient iteration %d: best %.9g, bound %.9g',
                         it, best_value, bound)
    else:
        solution = _solution(instance, best_p, algorithms.SUPERGRADIENT,
                             fares, bound=bound, iterations=max_iterations)
        raise RelaxationNotConvergedError(max_iterations, solution,
                                          bound - best_value)

    logger.info('supergradient ascent: %d iterations, value %.6g, '
                'bound %.6g', len(history), best_value, bound)
    return _solution(instance, best_p, algorithms.SUPERGRADIENT, fares,
                     bound=bound, iterations=len(history))


def solve_relaxation(instance, method=algorithms.HIGHS, fares=FLEXIBLE,
                     **options):
    """
    Solve the linear relaxation of the leader's problem

    The relaxation replaces the fine probability 1 - pi(P) by the sum of
    the probabilities on P, capped at 1, and caps the revenue per passenger
    as revenue_caps does. With flexible fares the optimum bounds the profit
    of every strategy in all four model variants, with fixed fares it
    bounds the two fixed-fare variants more tightly.

    :param Instance: The instance
    :param str: 'lp' (HiGHS) or 'supergradient'
    :param str/VariantId: 'fix', 'flex' or a model variant
    :param options: 'eta0' and 'max_iterations' of the supergradient method
    :return RelaxationSolution: Probabilities, potentials and bound
    """
    if method not in (algorithms.HIGHS, algorithms.SUPERGRADIENT):
        raise InvalidConfigError('unknown relaxation method "%s"' % method)
    fares = parse_fares(fares)
    if instance.budget <= 0:
        return _solution(instance, np.zeros(instance.network.n_edges), method,
                         fares)
    if method == algorithms.HIGHS:
        return _solve_lp(instance, fares)
    return _solve_supergradient(instance, fares, **options)


def round_relaxation(instance, relaxation, variant):
    """
    Use the probabilities of the relaxation as the strategy

    :param Instance: The instance
    :param RelaxationSolution: The solved relaxation
    :param str/VariantId: The model variant
    :return LeaderSolution: The strategy with its true profit
    """
    variant = parse(variant)
    if relaxation.fares == FIXED and variant.fares != FIXED:
        raise InvalidConfigError(
            'relaxation with fixed fares does not bound variant "%s"' %
            (variant,))
    breakdown = evaluate_profit(instance, relaxation.strategy, variant)
    return LeaderSolution(relaxation.strategy, variant, breakdown,
                          relaxation.bound, starts.LP_ROUND)
