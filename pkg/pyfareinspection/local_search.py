"""Module with the local search that shifts inspection probability between
edges"""

import dataclasses
import itertools
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from pathlib import Path

import numpy as np

from .data import LeaderSolution, RelaxationSolution
from .errors import InvalidConfigError, InvalidSupportError
from .leader import evaluate_profit, revenue
from .network import InspectionStrategy, dijkstra
from .relaxation import solve_relaxation
from .types import starts
from .types.tolerances import SUPPORT_TOL, TOL, WINDOW_TOL
from .types.variants import FLEXIBLE, NON_ADAPTIVE, parse

logger = logging.getLogger(__name__)


@dataclasses.dataclass
class LocalSearchConfig:
    """
    Parameters of the local search

    Attributes
    ----------
    k : int
        Largest number of edges that give or receive probability in a move
    delta0 : float
        Initial step length
    decay : float
        Factor applied to the step length after every iteration
    max_iterations : int
        Iteration limit
    stall_threshold : float
        Relative improvement below which an iteration counts as stalled
    stall_patience : int
        Consecutive stalled iterations that stop the search
    seed : int
        Seed recorded with the run, the move order itself is fixed
    workers : int
        Processes that evaluate candidate moves, 1 runs in-process
    incremental : bool
        Re-solve only the commodities whose response a move can change
    """
    k: int = 1
    delta0: float = 0.1
    decay: float = 0.9
    max_iterations: int = 30
    stall_threshold: float = 1e-6
    stall_patience: int = 5
    seed: int = 0
    workers: int = 1
    incremental: bool = True

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 1:
            raise InvalidConfigError('k must be a positive integer')
        if not self.delta0 > 0:
            raise InvalidConfigError('delta0 must be positive')
        if not 0 < self.decay < 1:
            raise InvalidConfigError('decay must lie in (0, 1)')
        if self.max_iterations < 0 or self.stall_patience < 1:
            raise InvalidConfigError(
                'max_iterations must be nonnegative and stall_patience '
                'positive')
        if self.stall_threshold < 0:
            raise InvalidConfigError('stall_threshold must be nonnegative')
        if self.workers < 1:
            raise InvalidConfigError('workers must be positive')

    @classmethod
    def from_dict(cls, data):
        """
        :param dict: Overrides of the defaults
        :return LocalSearchConfig: The configuration
        """
        if not isinstance(data, dict):
            raise InvalidConfigError('expected a JSON object')
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise InvalidConfigError('unknown key "%s"' % unknown[0])
        return cls(**data)

    @classmethod
    def from_file(cls, path):
        """
        :param str/Path: JSON file with overrides of the defaults
        :return LocalSearchConfig: The configuration
        """
        try:
            data = json.loads(Path(path).read_text(encoding='utf-8'))
        except json.JSONDecodeError as e:
            raise InvalidConfigError('%s is not valid JSON: %s' %
                                     (path, e.msg)) from e
        return cls.from_dict(data)


def support_set(source, artifact):
    """
    Candidate edges of the local search

    :param str: 'relaxation' or 'multicut'
    :param RelaxationSolution/InspectionStrategy: The solved artifact
    :return tuple: Sorted ids of the edges with probability above 1e-6
    """
    if source not in starts.SOURCES:
        raise InvalidSupportError('unknown source "%s", should be one of %s' %
                                  (source, ', '.join(starts.SOURCES)))
    if isinstance(artifact, RelaxationSolution):
        artifact = artifact.strategy
    return artifact.support(SUPPORT_TOL)


def _water_fill(capacity, amount):
    """Split the amount as evenly as the capacities allow"""
    out = np.zeros_like(capacity)
    remaining, left = amount, len(capacity)
    for idx in np.argsort(capacity, kind='stable'):
        take = min(capacity[idx], remaining / left)
        out[idx] = take
        remaining -= take
        left -= 1
    return out


def _moves(support, k):
    """Pairs of disjoint edge sets (receivers, givers) in fixed order"""
    for n_plus in range(1, k + 1):
        for plus in itertools.combinations(support, n_plus):
            rest = [e for e in support if e not in plus]
            for n_minus in range(1, k + 1):
                for minus in itertools.combinations(rest, n_minus):
                    yield list(plus), list(minus)


def _shift(p, plus, minus, delta):
    """
    Move up to delta probability from the givers to the receivers

    :return numpy.ndarray/None: The new probabilities, None if nothing moves
    """
    amount = min(delta, p[minus].sum(), (1.0 - p[plus]).sum())
    if amount <= TOL:
        return None
    q = p.copy()
    q[minus] -= _water_fill(p[minus], amount)
    q[plus] += _water_fill(1.0 - p[plus], amount)
    return np.clip(q, 0.0, 1.0)


def _source_distances(instance):
    """Cost distances from every distinct commodity source"""
    net = instance.network
    return {s: dijkstra(net, net.costs, s)[0]
            for s in sorted({k.source for k in instance.commodities})}


def _response_masks(instance, variant, parts, from_source, epsilon):
    """
    Edges whose probability can change the response of every commodity

    Every path through edge (u, v) costs at least W = d(s, u) + c_e + SP(v).
    A non-adaptive passenger ignores edges with W above the current evasion
    value, the current best path stays cheaper whatever is inspected there.
    An adaptive passenger pays at least min(SP + F, W) on such a path, so
    the same holds off the current path while the evasion value is below
    SP + F. Apart from that, an adaptive passenger never leaves u on an
    edge with c_e + SP(v) above SP(u) + F.

    :return numpy.ndarray: Boolean matrix, one row per commodity
    """
    net, fine = instance.network, instance.fine
    masks = np.ones((instance.n_commodities, net.n_edges), dtype=bool)
    if variant.followers == NON_ADAPTIVE and epsilon is not None:
        return masks
    for i, (k, part) in enumerate(zip(instance.commodities, parts)):
        to_target = instance.dist_to_target(i)
        through = from_source[k.source][net.tails] + net.costs + \
            to_target[net.heads]
        window = through <= part.evasion + WINDOW_TOL
        if variant.followers == NON_ADAPTIVE:
            masks[i] = window
            continue
        with np.errstate(invalid='ignore'):
            reduced = net.costs + to_target[net.heads] - to_target[net.tails]
        masks[i] = np.isfinite(through) & (reduced <= fine + WINDOW_TOL)
        if part.evasion < instance.sp_cost(i) + fine - WINDOW_TOL:
            window[np.asarray(part.evasion_path, dtype=np.int64)] = True
            masks[i] &= window
    return masks


def _candidate(instance, variant, epsilon, parts, job):
    """
    Profit of a candidate strategy, only the given commodities are solved

    :return tuple: Total profit and the new revenues of those commodities
    """
    q, affected = job
    strategy = InspectionStrategy(q)
    new = list(parts)
    for i in affected:
        new[i] = revenue(instance, strategy, i, variant, epsilon)
    total = math.fsum(k.demand * x.gamma
                      for k, x in zip(instance.commodities, new))
    return total, [new[i] for i in affected]


def local_search(instance, variant, start, support=None, config=None,
                 upper_bound=None, provenance=starts.LP, epsilon=None):
    """
    Improve a strategy by shifting probability between support edges

    Every iteration evaluates all moves that shift the current step length
    from at most k edges to at most k other edges, applies the best one if
    it raises the profit and shrinks the step length. Unless disabled in
    the configuration, a move only re-solves the commodities whose response
    it can change.

    :param Instance: The instance
    :param str/VariantId: The model variant
    :param InspectionStrategy: Feasible start strategy
    :param iterable/None: Candidate edges, the support of the start if None
    :param LocalSearchConfig/None: Parameters, defaults if None
    :param float/None: Upper bound for the gap, solved relaxation if None
    :param str: Name of the start recorded in the provenance
    :param float/None: Epsilon of the approximation scheme, exact if None
    :return LeaderSolution: The improved strategy
    """
    config = config or LocalSearchConfig()
    variant = parse(variant)
    instance.check_strategy(start)
    m = instance.network.n_edges
    support = start.support(SUPPORT_TOL) if support is None else \
        tuple(sorted({int(e) for e in support}))
    for e in support:
        if not 0 <= e < m:
            raise InvalidSupportError('unknown edge %d' % e)
    missing = set(start.support(SUPPORT_TOL)) - set(support)
    if missing:
        raise InvalidSupportError(
            'edge %d has positive probability but is not in the support' %
            min(missing))
    if upper_bound is None:
        upper_bound = solve_relaxation(instance, fares=variant).bound

    p = start.probabilities.copy()
    breakdown = evaluate_profit(instance, start, variant, epsilon)
    parts, profit = list(breakdown.per_commodity), breakdown.total_profit
    history = [profit]
    delta, stalled, iterations = config.delta0, 0, 0
    everyone = tuple(range(instance.n_commodities))
    if config.incremental:
        from_source = _source_distances(instance)
        demand = np.array([k.demand > 0 for k in instance.commodities],
                          dtype=bool)
    # Flexible revenues never drop when probabilities rise
    monotone = variant.fares == FLEXIBLE and \
        (variant.followers != NON_ADAPTIVE or epsilon is None)

    pool = ProcessPoolExecutor(config.workers) if config.workers > 1 else None
    try:
        while iterations < config.max_iterations and len(support) >= 2:
            if config.incremental:
                masks = _response_masks(instance, variant, parts,
                                        from_source, epsilon)
                masks &= demand[:, None]
                gains = masks.any(axis=0)
            jobs = []
            for plus, minus in _moves(support, config.k):
                # A move that changes no response on its receivers only loses
                if config.incremental and monotone and not gains[plus].any():
                    continue
                q = _shift(p, plus, minus, delta)
                if q is None:
                    continue
                affected = tuple(np.nonzero(
                    masks[:, plus + minus].any(axis=1))[0].tolist()) \
                    if config.incremental else everyone
                jobs.append((q, affected))

            evaluate = partial(_candidate, instance, variant, epsilon, parts)
            if pool is not None:
                results = list(pool.map(evaluate, jobs, chunksize=8))
            else:
                results = [evaluate(job) for job in jobs]
            iterations += 1

            previous = profit
            if results:
                best = int(np.argmax([total for total, _ in results]))
                if results[best][0] > profit + 1e-12:
                    p, profit = jobs[best][0], results[best][0]
                    for i, part in zip(jobs[best][1], results[best][1]):
                        parts[i] = part
            history.append(profit)
            logger.debug('iteration %d: step %.4g, %d moves, %d responses, '
                         'profit %.9g', iterations, delta, len(jobs),
                         sum(len(a) for _, a in jobs), profit)

            delta *= config.decay
            if profit - previous < config.stall_threshold * \
                    max(abs(previous), TOL):
                stalled += 1
                if stalled >= config.stall_patience:
                    break
            else:
                stalled = 0
    finally:
        if pool is not None:
            pool.shutdown()

    strategy = InspectionStrategy(p)
    breakdown = evaluate_profit(instance, strategy, variant, epsilon)
    logger.info('local search from %s: %d iterations, profit %.6g -> %.6g',
                provenance, iterations, history[0], breakdown.total_profit)
    return LeaderSolution(strategy, variant, breakdown, upper_bound,
                          starts.LOCAL_SEARCH.format(provenance), iterations,
                          history)


def grid_search(instance, variant, edges, step=0.05, upper_bound=None):
    """
    Best strategy on a grid over a small set of edges

    All probabilities i * step on the given edges whose sum fits the budget
    are evaluated, the first best one in lexicographic grid order wins.

    :param Instance: The instance
    :param str/VariantId: The model variant
    :param iterable: Edge ids that may be inspected
    :param float: Grid step, 1 / step should be an integer
    :param float/None: Upper bound for the gap, solved relaxation if None
    :return LeaderSolution: The best grid strategy
    """
    if not 0 < step <= 1:
        raise InvalidConfigError('grid step must lie in (0, 1], got %s' % step)
    edges = sorted({int(e) for e in edges})
    levels = int(round(1.0 / step))
    if upper_bound is None:
        upper_bound = solve_relaxation(instance, fares=variant).bound

    best = None
    p = np.zeros(instance.network.n_edges)
    for point in itertools.product(range(levels + 1), repeat=len(edges)):
        if sum(point) > instance.budget * levels * (1 + TOL) + TOL:
            continue
        p[edges] = np.array(point, dtype=float) / levels
        strategy = InspectionStrategy(p)
        if strategy.total() > instance.budget:
            strategy = InspectionStrategy(p * instance.budget /
                                          strategy.total())
        breakdown = evaluate_profit(instance, strategy, variant)
        if best is None or breakdown.total_profit > best[1].total_profit:
            best = (strategy, breakdown)

    logger.debug('grid over %d edges: best profit %.6g', len(edges),
                 best[1].total_profit)
    return LeaderSolution(best[0], parse(variant), best[1], upper_bound,
                          starts.GRID)
