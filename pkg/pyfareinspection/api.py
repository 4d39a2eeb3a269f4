"""Module that provides the FareInspection interface object"""

import logging

from .errors import InvalidConfigError
from .followers import (brute_force_oracle, solve_adaptive,
                        solve_nonadaptive_exact, solve_nonadaptive_fptas)
from .leader import evaluate_profit
from .local_search import LocalSearchConfig, local_search, support_set
from .multicut import find_multicut, multicut_start
from .relaxation import round_relaxation, solve_relaxation
from .serialization import load_instance_file
from .series_parallel import solve_nonadaptive_sp
from .types import algorithms, starts
from .types.variants import (ADAPTIVE, FLEXIBLE, NON_ADAPTIVE, parse_fares,
                             parse_followers)

logger = logging.getLogger(__name__)


class FareInspection:
    """
    The main object that provides the interface for solving one instance

    The multicut does not depend on the model variant, the relaxation only
    on the fare setting. Both are computed once and reused by all solves.

    Attributes
    ----------
    instance : Instance
        The instance to solve
    method : str
        Method of the relaxation, 'lp' or 'supergradient'

    Methods
    -------
    from_file
        Load the instance from JSON file
    follower
        Best response of one commodity
    relaxation
        The solved relaxation
    start
        Start strategy and its candidate edges
    profit
        Revenues of a strategy
    solve
        Relaxation, start strategy and local search
    """
    def __init__(self, instance, method=algorithms.HIGHS):
        """
        :param Instance: The instance
        :param str: Method of the relaxation
        """
        self.instance = instance
        self.method = method
        self._relaxations = {}
        self._cut = None

    @classmethod
    def from_file(cls, path, method=algorithms.HIGHS):
        """
        :param str/Path: Path of the instance JSON file
        :param str: Method of the relaxation
        :return FareInspection: The interface object
        """
        return cls(load_instance_file(path), method)

    def follower(self, strategy, commodity, variant=NON_ADAPTIVE,
                 algorithm=algorithms.EXACT, epsilon=None):
        """
        Best response of one commodity

        :param InspectionStrategy: The inspection probabilities
        :param int: Index of the commodity
        :param str: 'n' for non-adaptive, 'a' for adaptive followers
        :param str: 'exact', 'fptas', 'sp' or 'oracle'
        :param float/None: Epsilon of the 'fptas' algorithm
        :return FollowerResult: The best path
        """
        variant = parse_followers(variant)
        if not 0 <= commodity < self.instance.n_commodities:
            raise InvalidConfigError('commodity index %s out of range' %
                                     commodity)
        self.instance.check_strategy(strategy)
        if algorithm == algorithms.ORACLE:
            return brute_force_oracle(self.instance, strategy, commodity,
                                      variant)
        if variant == ADAPTIVE:
            if algorithm != algorithms.EXACT:
                raise InvalidConfigError(
                    'algorithm "%s" is available only for non-adaptive '
                    'followers' % algorithm)
            return solve_adaptive(self.instance, strategy, commodity)
        if algorithm == algorithms.EXACT:
            return solve_nonadaptive_exact(self.instance, strategy, commodity)
        if algorithm == algorithms.FPTAS:
            return solve_nonadaptive_fptas(self.instance, strategy, commodity,
                                           0.1 if epsilon is None else epsilon)
        if algorithm == algorithms.SP:
            return solve_nonadaptive_sp(self.instance, strategy, commodity)
        raise InvalidConfigError('unknown algorithm "%s", should be one of %s'
                                 % (algorithm,
                                    ', '.join(algorithms.FOLLOWER_ALL)))

    def relaxation(self, fares=FLEXIBLE):
        """
        :param str/VariantId: 'fix', 'flex' or a model variant
        :return RelaxationSolution: The solved relaxation
        """
        fares = parse_fares(fares)
        if fares not in self._relaxations:
            self._relaxations[fares] = solve_relaxation(
                self.instance, self.method, fares)
        return self._relaxations[fares]

    def start(self, start=starts.LP, fares=FLEXIBLE):
        """
        Start strategy of the local search and its candidate edges

        :param str: 'lp' or 'multicut'
        :param str/VariantId: Fare setting of the relaxation start
        :return tuple: InspectionStrategy and tuple of edge ids
        """
        if start == starts.LP:
            relaxation = self.relaxation(fares)
            return relaxation.strategy, support_set(starts.RELAXATION,
                                                    relaxation)
        if start == starts.MULTICUT:
            if self._cut is None:
                self._cut = find_multicut(self.instance)
            strategy = multicut_start(self.instance, self._cut)
            return strategy, support_set(starts.MULTICUT, strategy)
        raise InvalidConfigError('unknown start "%s", should be one of %s' %
                                 (start, ', '.join(starts.ALL)))

    def profit(self, strategy, variant, epsilon=None):
        """
        :param InspectionStrategy: The inspection probabilities
        :param str/VariantId: The model variant
        :param float/None: Epsilon of the approximation scheme, exact if None
        :return RevenueBreakdown: The per-commodity revenues
        """
        return evaluate_profit(self.instance, strategy, variant, epsilon)

    def rounded(self, variant):
        """
        :param str/VariantId: The model variant
        :return LeaderSolution: The relaxation used as strategy
        """
        return round_relaxation(self.instance, self.relaxation(variant),
                                variant)

    def solve(self, variant, start=starts.LP, config=None, epsilon=None):
        """
        Relaxation, start strategy and local search

        :param str/VariantId: The model variant
        :param str: 'lp' or 'multicut'
        :param LocalSearchConfig/None: Parameters of the local search
        :param float/None: Epsilon of the approximation scheme, exact if None
        :return LeaderSolution: The best strategy found
        """
        strategy, support = self.start(start, variant)
        logger.info('solving %s from %s start with %d candidate edges',
                    variant, start, len(support))
        return local_search(self.instance, variant, strategy, support,
                            config or LocalSearchConfig(),
                            upper_bound=self.relaxation(variant).bound,
                            provenance=start, epsilon=epsilon)

    def __repr__(self):
        return '<Instance of {} for {!r}>'.format(self.__class__.__name__,
                                                  self.instance)
